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

#include "smdt/world/actors.hpp"

#include <algorithm>
#include <string>

namespace smdt::world {

std::string_view to_string(ActorClass c) {
  switch (c) {
    case ActorClass::vehicle: return "vehicle";
    case ActorClass::pedestrian: return "pedestrian";
    case ActorClass::other: return "other";
  }
  return "other";
}

std::optional<ActorClass> parse_actor_class(std::string_view s) {
  if (s == "vehicle") return ActorClass::vehicle;
  if (s == "pedestrian") return ActorClass::pedestrian;
  if (s == "other") return ActorClass::other;
  return std::nullopt;
}

void Actor::validate() const {
  if (trajectory.empty()) {
    throw Error(Errc::configuration, "actor " + std::to_string(id) + " has no position");
  }
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    if (trajectory[i].time <= trajectory[i - 1].time) {
      throw Error(Errc::configuration,
                  "actor " + std::to_string(id) + " trajectory timestamps must strictly increase");
    }
  }
  if (disappear <= appear) {
    throw Error(Errc::configuration, "actor " + std::to_string(id) + " disappears before it appears");
  }
}

std::optional<ActorState> actor_state_at(const Actor& actor, SimTime t) {
  ActorState st{actor.id, actor.actor_class, {}, {}, actor.footprint};
  if (actor.is_static()) {
    if (t < actor.appear || t >= actor.disappear) return std::nullopt;
    st.position = actor.trajectory.front().position;
    return st;
  }
  const auto& traj = actor.trajectory;
  if (t < traj.front().time || t > traj.back().time) return std::nullopt;
  std::size_t i = 1;
  while (i + 1 < traj.size() && traj[i].time < t) ++i;
  const TrajectoryPoint& a = traj[i - 1];
  const TrajectoryPoint& b = traj[i];
  const double span = (b.time - a.time) * 1e-6;
  const double u = std::clamp((t - a.time) * 1e-6 / span, 0.0, 1.0);
  st.position = a.position + (b.position - a.position) * u;
  st.velocity = (b.position - a.position) * (1.0 / span);
  return st;
}

std::vector<ActorState> WorldSnapshot::observable() const {
  std::vector<ActorState> all = actors;
  all.push_back({ego_id, ActorClass::vehicle, ego.position(),
                 Vec2{std::cos(ego.yaw), std::sin(ego.yaw)} * ego.speed, ego_footprint});
  return all;
}

WorldSnapshot snapshot_at(SimTime t, const EgoState& ego, ActorId ego_id,
                          const std::vector<Actor>& actors) {
  WorldSnapshot snap;
  snap.time = t;
  snap.ego = ego;
  snap.ego_id = ego_id;
  for (const Actor& a : actors) {
    if (auto st = actor_state_at(a, t)) snap.actors.push_back(*st);
  }
  return snap;
}

}  // namespace smdt::world
