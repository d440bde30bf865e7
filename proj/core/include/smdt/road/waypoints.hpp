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

#ifndef SMDT_ROAD_WAYPOINTS_HPP_
#define SMDT_ROAD_WAYPOINTS_HPP_

#include <iosfwd>
#include <span>
#include <vector>

#include "smdt/road/routing.hpp"

namespace smdt::road {

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;
  double velocity = 0.0;

  Vec2 position() const { return {x, y}; }
  bool operator==(const Waypoint&) const = default;
};

inline constexpr double kDefaultWaypointSpacing = 1.0;

/// Samples the route polyline so consecutive waypoints are at most `spacing`
/// apart. Every polyline vertex is kept, so the chord length of the result
/// equals the route arc length. Yaw follows the outgoing tangent (incoming
/// for the final point); velocity is the owning segment's free-flow speed.
std::vector<Waypoint> route_to_waypoints(const Route& route, double spacing,
                                         const RoadNetwork& network);

/// Sum of distances between consecutive waypoints.
double path_length(std::span<const Waypoint> waypoints);

/// Recovers the segment chain a waypoint list was sampled from by matching
/// waypoints to node positions (within `tolerance` metres). Throws
/// Error(not_found) if consecutive nodes are not joined by a segment.
Route infer_route(std::span<const Waypoint> waypoints, const RoadNetwork& network,
                  double tolerance = 1e-3);

/// Line-oriented text: header `x,y,z,yaw,velocity`, one waypoint per LF
/// terminated line. Values use shortest round-trip decimal form.
void write_waypoint_file(std::ostream& out, std::span<const Waypoint> waypoints);
std::vector<Waypoint> read_waypoint_file(std::istream& in);

}  // namespace smdt::road

#endif  // SMDT_ROAD_WAYPOINTS_HPP_
