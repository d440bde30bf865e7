// Copyright 2026 The smdt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smdt/road/waypoints.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

namespace smdt::road {

std::vector<Waypoint> route_to_waypoints(const Route& route, double spacing,
                                         const RoadNetwork& network) {
  if (!(spacing > 0.0)) throw Error(Errc::configuration, "waypoint spacing must be positive");
  if (route.empty()) throw Error(Errc::configuration, "cannot sample an empty route");

  std::vector<Waypoint> out;
  double last_yaw = 0.0;
  double last_speed = 0.0;
  for (SegmentId id : route.segments) {
    const Segment& seg = network.segment(id);
    for (std::size_t i = 1; i < seg.polyline.size(); ++i) {
      const Vec2 a = seg.polyline[i - 1];
      const Vec2 b = seg.polyline[i];
      const double len = distance(a, b);
      if (len <= 0.0) continue;
      const double yaw = std::atan2(b.y - a.y, b.x - a.x);
      const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing - 1e-12)));
      // The shared vertex with the previous piece is re-emitted with this
      // piece's heading and speed.
      if (!out.empty()) out.pop_back();
      for (std::size_t k = 0; k <= pieces; ++k) {
        const Vec2 p = a + (b - a) * (static_cast<double>(k) / static_cast<double>(pieces));
        out.push_back({p.x, p.y, 0.0, yaw, seg.free_flow_speed});
      }
      last_yaw = yaw;
      last_speed = seg.free_flow_speed;
    }
  }
  if (!out.empty()) {
    out.back().yaw = last_yaw;
    out.back().velocity = last_speed;
  }
  return out;
}

double path_length(std::span<const Waypoint> waypoints) {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    total += distance(waypoints[i - 1].position(), waypoints[i].position());
  }
  return total;
}

Route infer_route(std::span<const Waypoint> waypoints, const RoadNetwork& network,
                  double tolerance) {
  std::vector<NodeId> nodes;
  for (const Waypoint& w : waypoints) {
    for (const Node& n : network.nodes()) {
      if (distance(w.position(), n.position) <= tolerance) {
        if (nodes.empty() || nodes.back() != n.id) nodes.push_back(n.id);
        break;
      }
    }
  }
  std::vector<SegmentId> segments;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    std::optional<SegmentId> link;
    for (SegmentId id : network.outgoing(nodes[i - 1])) {
      if (network.segment(id).to == nodes[i]) {
        link = id;
        break;
      }
    }
    if (!link) {
      throw Error(Errc::not_found, "no segment joins nodes " + std::to_string(nodes[i - 1]) +
                                       " and " + std::to_string(nodes[i]));
    }
    segments.push_back(*link);
  }
  if (segments.empty()) throw Error(Errc::not_found, "waypoints do not span any segment");
  return route_from_segments(network, std::move(segments));
}

namespace {

constexpr std::string_view kHeader = "x,y,z,yaw,velocity";

void append_double(std::string& line, double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  line.append(buf.data(), end);
}

}  // namespace

void write_waypoint_file(std::ostream& out, std::span<const Waypoint> waypoints) {
  std::string text(kHeader);
  text.push_back('\n');
  for (const Waypoint& w : waypoints) {
    for (double v : {w.x, w.y, w.z, w.yaw, w.velocity}) {
      append_double(text, v);
      text.push_back(',');
    }
    text.back() = '\n';
  }
  out << text;
  if (!out) throw Error(Errc::io, "failed to write waypoint file");
}

std::vector<Waypoint> read_waypoint_file(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw Error(Errc::io, "waypoint file must start with '" + std::string(kHeader) + "'");
  }
  std::vector<Waypoint> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 5> f{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t i = 0; i < f.size(); ++i) {
      auto [next, ec] = std::from_chars(p, end, f[i]);
      const char expected = i + 1 < f.size() ? ',' : '\0';
      if (ec != std::errc{} || (expected ? (next == end || *next != expected) : next != end)) {
        throw Error(Errc::io, "malformed waypoint on line " + std::to_string(line_no));
      }
      p = next + (expected ? 1 : 0);
    }
    if (f[4] < 0.0) throw Error(Errc::io, "negative velocity on line " + std::to_string(line_no));
    out.push_back({f[0], f[1], f[2], f[3], f[4]});
  }
  return out;
}

}  // namespace smdt::road
