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

#ifndef SMDT_WORLD_ACTORS_HPP_
#define SMDT_WORLD_ACTORS_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "smdt/common.hpp"

namespace smdt::world {

enum class ActorClass : std::uint8_t { vehicle = 0, pedestrian = 1, other = 2 };

std::string_view to_string(ActorClass c);
std::optional<ActorClass> parse_actor_class(std::string_view s);

struct Footprint {
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct TrajectoryPoint {
  SimTime time;
  Vec2 position;
};

/// Scripted traffic participant. A static actor has a single trajectory
/// point and is live during [appear, disappear); a moving actor is live
/// between its first and last trajectory timestamps and is interpolated
/// linearly in between.
struct Actor {
  ActorId id = 0;
  ActorClass actor_class = ActorClass::pedestrian;
  Footprint footprint;
  std::vector<TrajectoryPoint> trajectory;
  SimTime appear{0};
  SimTime disappear{std::numeric_limits<std::int64_t>::max()};

  /// Throws Error(configuration) unless timestamps strictly increase.
  void validate() const;
  bool is_static() const { return trajectory.size() == 1; }
};

struct ActorState {
  ActorId id = 0;
  ActorClass actor_class = ActorClass::pedestrian;
  Vec2 position;
  Vec2 velocity;
  Footprint footprint;
};

/// Position and velocity at time `t`, or nullopt when the actor is not live.
std::optional<ActorState> actor_state_at(const Actor& actor, SimTime t);

struct EgoState {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double speed = 0.0;
  double wheelbase = 2.7;

  Vec2 position() const { return {x, y}; }
  Pose2 pose() const { return {x, y, yaw}; }
};

/// Ground truth at one instant, consumed by the sensing models.
struct WorldSnapshot {
  SimTime time;
  EgoState ego;
  ActorId ego_id = 0;
  Footprint ego_footprint{4.5, 1.8, 1.5};
  std::vector<ActorState> actors;

  /// Actors plus the ego vehicle, which roadside sensors see like any other
  /// vehicle.
  std::vector<ActorState> observable() const;
};

WorldSnapshot snapshot_at(SimTime t, const EgoState& ego, ActorId ego_id,
                          const std::vector<Actor>& actors);

}  // namespace smdt::world

#endif  // SMDT_WORLD_ACTORS_HPP_
