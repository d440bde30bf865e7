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

#include "smdt/road/road_network.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace smdt::road {

namespace {

// Distances closer than this are treated as ties.
constexpr double kTieEps = 1e-9;

double arc_length(std::span<const Vec2> line) {
  double total = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) total += distance(line[i - 1], line[i]);
  return total;
}

}  // namespace

Segment Segment::make(SegmentId id, NodeId from, NodeId to, std::vector<Vec2> polyline,
                      double free_flow_speed) {
  Segment s;
  s.id = id;
  s.from = from;
  s.to = to;
  s.length = arc_length(polyline);
  s.polyline = std::move(polyline);
  s.free_flow_speed = free_flow_speed;
  return s;
}

RoadNetwork::RoadNetwork(std::vector<Node> nodes, std::vector<Segment> segments)
    : nodes_(std::move(nodes)), segments_(std::move(segments)) {
  std::ranges::sort(nodes_, {}, &Node::id);
  std::ranges::sort(segments_, {}, &Segment::id);

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!node_index_.emplace(nodes_[i].id, i).second) {
      throw Error(Errc::configuration, "duplicate node id " + std::to_string(nodes_[i].id));
    }
  }

  std::unordered_map<NodeId, std::set<NodeId>> neighbours;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    const std::string tag = "segment " + std::to_string(s.id);
    if (!segment_index_.emplace(s.id, i).second) {
      throw Error(Errc::configuration, "duplicate " + tag);
    }
    if (!has_node(s.from) || !has_node(s.to)) {
      throw Error(Errc::configuration, tag + " references a missing node");
    }
    if (s.polyline.size() < 2) {
      throw Error(Errc::configuration, tag + " needs at least two polyline points");
    }
    if (distance(s.polyline.front(), node(s.from).position) > 1e-6 ||
        distance(s.polyline.back(), node(s.to).position) > 1e-6) {
      throw Error(Errc::configuration, tag + " polyline does not join its end nodes");
    }
    if (!(s.length > 0.0) || std::abs(s.length - arc_length(s.polyline)) > 1e-6) {
      throw Error(Errc::configuration, tag + " length must equal its positive arc length");
    }
    if (!(s.free_flow_speed > 0.0)) {
      throw Error(Errc::configuration, tag + " free-flow speed must be positive");
    }
    outgoing_[s.from].push_back(s.id);
    neighbours[s.from].insert(s.to);
    neighbours[s.to].insert(s.from);
    max_speed_ = std::max(max_speed_, s.free_flow_speed);
  }
  for (const auto& [id, set] : neighbours) {
    degree_[id] = set.size() - (set.contains(id) ? 1 : 0);
  }
}

const Node& RoadNetwork::node(NodeId id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) {
    throw Error(Errc::not_found, "unknown node " + std::to_string(id));
  }
  return nodes_[it->second];
}

const Segment& RoadNetwork::segment(SegmentId id) const {
  auto it = segment_index_.find(id);
  if (it == segment_index_.end()) {
    throw Error(Errc::not_found, "unknown segment " + std::to_string(id));
  }
  return segments_[it->second];
}

std::span<const SegmentId> RoadNetwork::outgoing(NodeId id) const {
  auto it = outgoing_.find(id);
  if (it == outgoing_.end()) return {};
  return it->second;
}

std::size_t RoadNetwork::degree(NodeId id) const {
  auto it = degree_.find(id);
  return it == degree_.end() ? 0 : it->second;
}

PolylineProjection project_to_polyline(Vec2 point, std::span<const Vec2> line) {
  PolylineProjection best{0.0, kInfinity, line.empty() ? Vec2{} : line.front(), 0};
  double start = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const Vec2 a = line[i - 1];
    const Vec2 ab = line[i] - a;
    const double len2 = ab.dot(ab);
    const double len = std::sqrt(len2);
    double t = len2 > 0.0 ? (point - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 foot = a + ab * t;
    const double d = distance(point, foot);
    if (d < best.distance - kTieEps) best = {start + t * len, d, foot, i - 1};
    start += len;
  }
  if (line.size() == 1) best.distance = distance(point, line.front());
  return best;
}

Vec2 point_at_offset(std::span<const Vec2> line, double s) {
  if (line.empty()) return {};
  if (s <= 0.0) return line.front();
  for (std::size_t i = 1; i < line.size(); ++i) {
    const double len = distance(line[i - 1], line[i]);
    if (s <= len && len > 0.0) return line[i - 1] + (line[i] - line[i - 1]) * (s / len);
    s -= len;
  }
  return line.back();
}

SegmentProjection project_to_segment(Vec2 point, const RoadNetwork& network,
                                     std::span<const SegmentId> candidates) {
  if (network.empty() || candidates.empty()) {
    throw Error(Errc::configuration, "projection onto an empty road network");
  }
  SegmentProjection best{0, 0.0, kInfinity};
  for (SegmentId id : candidates) {
    const Segment& s = network.segment(id);
    const PolylineProjection p = project_to_polyline(point, s.polyline);
    if (p.distance < best.lateral_distance - kTieEps) {
      best = {s.id, std::clamp(p.offset, 0.0, s.length), p.distance};
    }
  }
  return best;
}

SegmentProjection project_to_segment(Vec2 point, const RoadNetwork& network) {
  std::vector<SegmentId> ids;
  ids.reserve(network.segments().size());
  for (const Segment& s : network.segments()) ids.push_back(s.id);
  return project_to_segment(point, network, ids);
}

}  // namespace smdt::road
