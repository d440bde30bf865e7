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

#include "smdt/road/routing.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace smdt::road {

namespace {

bool nearly_equal(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

struct Label {
  double cost = kInfinity;
  std::vector<NodeId> nodes;
  std::vector<SegmentId> segments;
};

double weight_of(const SegmentWeights& weights, const Segment& s) {
  auto it = weights.find(s.id);
  return it == weights.end() ? s.length : it->second;
}

// Scale that turns Euclidean metres into a lower bound on cost units.
double heuristic_scale(const RoadNetwork& network, const SegmentWeights& weights) {
  double scale = kInfinity;
  for (const Segment& s : network.segments()) scale = std::min(scale, weight_of(weights, s) / s.length);
  return std::isfinite(scale) ? scale : 0.0;
}

}  // namespace

SegmentWeights length_weights(const RoadNetwork& network) {
  SegmentWeights w;
  for (const Segment& s : network.segments()) w.emplace(s.id, s.length);
  return w;
}

Route shortest_route(const RoadNetwork& network, NodeId origin, NodeId dest,
                     const SegmentWeights& weights, Algorithm algorithm) {
  if (!network.has_node(origin) || !network.has_node(dest)) {
    throw Error(Errc::configuration, "route endpoints must be network nodes");
  }
  for (const auto& [id, w] : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(Errc::configuration, "segment " + std::to_string(id) + " has non-positive weight");
    }
  }

  const Vec2 goal = network.node(dest).position;
  const double scale = algorithm == Algorithm::astar ? heuristic_scale(network, weights) : 0.0;
  auto heuristic = [&](NodeId n) { return scale * distance(network.node(n).position, goal); };

  // std::map keeps references stable while new labels are inserted.
  std::map<NodeId, Label> labels;
  std::unordered_set<NodeId> settled;
  // (f, g, node): smaller g first among equal f so optimal predecessors
  // settle before their successors.
  using Entry = std::tuple<double, double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  labels[origin] = Label{0.0, {origin}, {}};
  open.emplace(heuristic(origin), 0.0, origin);

  while (!open.empty()) {
    const auto [f, g, u] = open.top();
    open.pop();
    if (settled.contains(u)) continue;
    if (g > labels[u].cost && !nearly_equal(g, labels[u].cost)) continue;
    settled.insert(u);
    if (u == dest) break;

    for (SegmentId sid : network.outgoing(u)) {
      const Segment& s = network.segment(sid);
      if (settled.contains(s.to)) continue;
      const Label& from = labels[u];
      const double cost = from.cost + weight_of(weights, s);
      Label& to = labels[s.to];
      bool replace = false;
      if (cost < to.cost && !nearly_equal(cost, to.cost)) {
        replace = true;
      } else if (nearly_equal(cost, to.cost)) {
        std::vector<NodeId> candidate = from.nodes;
        candidate.push_back(s.to);
        replace = candidate < to.nodes;
      }
      if (replace) {
        to.cost = cost;
        to.nodes = from.nodes;
        to.nodes.push_back(s.to);
        to.segments = from.segments;
        to.segments.push_back(sid);
        open.emplace(cost + heuristic(s.to), cost, s.to);
      }
    }
  }

  if (!settled.contains(dest)) {
    throw Error(Errc::no_route, "node " + std::to_string(dest) + " unreachable from " +
                                    std::to_string(origin));
  }
  if (origin == dest) return Route{{origin}, {}, 0.0};
  return route_from_segments(network, labels[dest].segments, weights);
}

Route route_from_segments(const RoadNetwork& network, std::vector<SegmentId> segments,
                          const SegmentWeights& weights) {
  Route r;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = network.segment(segments[i]);
    if (i == 0) {
      r.nodes.push_back(s.from);
    } else if (r.nodes.back() != s.from) {
      throw Error(Errc::configuration, "route segments are not contiguous at segment " +
                                           std::to_string(s.id));
    }
    r.nodes.push_back(s.to);
    r.total_cost += weight_of(weights, s);
  }
  r.segments = std::move(segments);
  return r;
}

double route_length(const Route& route, const RoadNetwork& network) {
  double total = 0.0;
  for (SegmentId id : route.segments) total += network.segment(id).length;
  return total;
}

RoutePosition locate_on_route(Vec2 pose, const Route& route, const RoadNetwork& network) {
  if (route.empty()) throw Error(Errc::configuration, "empty route");
  RoutePosition best{0, 0.0, kInfinity};
  for (std::size_t i = 0; i < route.segments.size(); ++i) {
    const Segment& s = network.segment(route.segments[i]);
    const PolylineProjection p = project_to_polyline(pose, s.polyline);
    if (p.distance < best.lateral - 1e-9) best = {i, std::clamp(p.offset, 0.0, s.length), p.distance};
  }
  return best;
}

std::optional<IntersectionAhead> next_intersection(Vec2 pose, const Route& route,
                                                   const RoadNetwork& network, double max_lateral) {
  const RoutePosition at = locate_on_route(pose, route, network);
  if (at.lateral > max_lateral) {
    throw Error(Errc::off_route, "pose is " + std::to_string(at.lateral) + " m off the route");
  }
  double remaining = network.segment(route.segments[at.segment_index]).length - at.offset;
  for (std::size_t i = at.segment_index; i < route.segments.size(); ++i) {
    if (i > at.segment_index) remaining += network.segment(route.segments[i]).length;
    const NodeId end = route.nodes[i + 1];
    if (network.is_intersection(end)) return IntersectionAhead{end, remaining};
  }
  return std::nullopt;
}

double distance_to_next_intersection(Vec2 pose, const Route& route, const RoadNetwork& network,
                                     double max_lateral) {
  const auto next = next_intersection(pose, route, network, max_lateral);
  return next ? next->distance : kInfinity;
}

}  // namespace smdt::road
