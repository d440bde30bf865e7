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

#include "smdt/cloud/twin.hpp"

namespace smdt::cloud {

Vec2 to_global(const Pose2& rsu, Vec2 rel) {
  return rotate_to_global(rsu, rel) + rsu.position();
}

Vec2 to_relative(const Pose2& rsu, Vec2 global) { return rsu::to_rsu_frame(rsu, global); }

Vec2 rotate_to_global(const Pose2& rsu, Vec2 v) {
  const double c = std::cos(rsu.yaw);
  const double s = std::sin(rsu.yaw);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace smdt::cloud
