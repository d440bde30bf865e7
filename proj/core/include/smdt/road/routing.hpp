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

#ifndef SMDT_ROAD_ROUTING_HPP_
#define SMDT_ROAD_ROUTING_HPP_

#include <map>
#include <optional>
#include <vector>

#include "smdt/road/road_network.hpp"

namespace smdt::road {

struct Route {
  std::vector<NodeId> nodes;
  std::vector<SegmentId> segments;
  double total_cost = 0.0;

  bool empty() const { return segments.empty(); }
  bool operator==(const Route&) const = default;
};

using SegmentWeights = std::map<SegmentId, double>;

enum class Algorithm { dijkstra, astar };

/// Weights equal to segment lengths.
SegmentWeights length_weights(const RoadNetwork& network);

/// Minimum-cost route from `origin` to `dest`. Equal-cost alternatives are
/// resolved to the lexicographically smallest node sequence, so both
/// algorithms return the same route. The A* heuristic is the Euclidean
/// distance to `dest` scaled by min(weight / length) over all segments,
/// which keeps it consistent for any positive weights.
///
/// Throws Error(configuration) for unknown nodes or non-positive weights and
/// Error(no_route) when `dest` is unreachable.
Route shortest_route(const RoadNetwork& network, NodeId origin, NodeId dest,
                     const SegmentWeights& weights, Algorithm algorithm);

/// Route built from an explicit segment chain; cost is the sum of `weights`
/// (segment lengths when `weights` is empty).
Route route_from_segments(const RoadNetwork& network, std::vector<SegmentId> segments,
                          const SegmentWeights& weights = {});

/// Total arc length of the route's segments.
double route_length(const Route& route, const RoadNetwork& network);

struct IntersectionAhead {
  NodeId node = 0;
  double distance = kInfinity;
};

/// Next intersection node still ahead on the route, or nullopt when none
/// remains. Throws Error(off_route) like distance_to_next_intersection.
std::optional<IntersectionAhead> next_intersection(Vec2 pose, const Route& route,
                                                   const RoadNetwork& network,
                                                   double max_lateral = 5.0);

/// Arc length along the route from `pose` (projected onto the route) to the
/// next intersection node still ahead. Returns kInfinity when no
/// intersection remains. Throws Error(off_route) if `pose` is more than
/// `max_lateral` metres from every route segment.
double distance_to_next_intersection(Vec2 pose, const Route& route, const RoadNetwork& network,
                                     double max_lateral = 5.0);

/// Where `pose` sits on a route: segment index into `route.segments` and
/// offset along it.
struct RoutePosition {
  std::size_t segment_index = 0;
  double offset = 0.0;
  double lateral = 0.0;
};

RoutePosition locate_on_route(Vec2 pose, const Route& route, const RoadNetwork& network);

}  // namespace smdt::road

#endif  // SMDT_ROAD_ROUTING_HPP_
