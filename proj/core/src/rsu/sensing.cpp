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

#include <algorithm>
#include <string>

#include "smdt/rsu/rsu.hpp"

namespace smdt::rsu {

Micros RsuConfig::frame_period_us() const {
  return static_cast<Micros>(1e6 / update_rate_hz);
}

void RsuConfig::validate() const {
  const std::string tag = "rsu " + std::to_string(id);
  if (!(sensing_range > 0.0)) throw Error(Errc::configuration, tag + ": sensing_range must be > 0");
  if (!(update_rate_hz > 0.0)) throw Error(Errc::configuration, tag + ": update_rate must be > 0");
  if (!(detection_prob > 0.0 && detection_prob <= 1.0)) {
    throw Error(Errc::configuration, tag + ": detection_prob must lie in (0, 1]");
  }
  if (position_noise_sigma < 0.0) {
    throw Error(Errc::configuration, tag + ": position_noise_sigma must be >= 0");
  }
}

Vec2 to_rsu_frame(const Pose2& rsu, Vec2 global) {
  const Vec2 d = global - rsu.position();
  const double c = std::cos(rsu.yaw);
  const double s = std::sin(rsu.yaw);
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

std::vector<Detection> sense(const world::WorldSnapshot& world, const RsuConfig& cfg, Rng& rng) {
  std::vector<world::ActorState> objects = world.observable();
  std::ranges::sort(objects, {}, &world::ActorState::id);

  std::vector<Detection> out;
  for (const world::ActorState& obj : objects) {
    const Vec2 rel = to_rsu_frame(cfg.pose, obj.position);
    if (rel.norm() > cfg.sensing_range) continue;
    if (cfg.detection_prob < 1.0 && !rng.bernoulli(cfg.detection_prob)) continue;
    Detection d{obj.actor_class, rel, obj.footprint};
    if (cfg.position_noise_sigma > 0.0) {
      d.rel.x = rng.normal(rel.x, cfg.position_noise_sigma);
      d.rel.y = rng.normal(rel.y, cfg.position_noise_sigma);
      if (d.rel.norm() > cfg.sensing_range) continue;
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace smdt::rsu
