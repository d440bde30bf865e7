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

#ifndef SMDT_RSU_RSU_HPP_
#define SMDT_RSU_RSU_HPP_

#include <optional>
#include <vector>

#include "smdt/common.hpp"
#include "smdt/net/wire.hpp"
#include "smdt/world/actors.hpp"

namespace smdt::rsu {

/// 30 Hz quantised to the integer microsecond clock.
inline constexpr Micros kDefaultFramePeriodUs = 33'333;

struct RsuConfig {
  RsuId id = 0;
  Pose2 pose;
  double sensing_range = 50.0;
  double update_rate_hz = 30.0;
  double detection_prob = 1.0;
  double position_noise_sigma = 0.0;
  Micros phase_us = 0;

  /// 1e6 / update_rate, truncated to whole microseconds.
  Micros frame_period_us() const;
  void validate() const;
};

struct Detection {
  world::ActorClass object_class = world::ActorClass::other;
  Vec2 rel;
  world::Footprint bbox;
};

struct Track {
  TrackId id = 0;
  world::ActorClass object_class = world::ActorClass::other;
  Vec2 rel;
  Vec2 velocity;
  world::Footprint bbox;
  std::uint32_t age = 0;
  std::uint32_t misses = 0;
};

struct PerceptionFrame {
  RsuId rsu_id = 0;
  SimTime timestamp;
  std::vector<Track> tracks;
};

/// Global point expressed in the RSU frame.
Vec2 to_rsu_frame(const Pose2& rsu, Vec2 global);

/// Every observable object inside sensing_range is reported independently
/// with probability detection_prob, at its RSU-frame position plus Gaussian
/// noise. Objects are visited in id order so draws are reproducible.
std::vector<Detection> sense(const world::WorldSnapshot& world, const RsuConfig& cfg, Rng& rng);

struct TrackerConfig {
  double gate_radius = 2.0;
  std::uint32_t max_misses = 5;
  double alpha = 0.5;
  double beta = 0.2;
};

/// Greedy nearest-neighbour multi-object tracker with an alpha-beta filter
/// per track. Track ids increase monotonically and are never reused.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}) : cfg_(cfg) {}

  /// Throws Error(fault) unless `timestamp` is later than the previous
  /// update. Returns the live tracks ordered by id.
  std::vector<Track> update(const std::vector<Detection>& detections, SimTime timestamp);

  const std::vector<Track>& tracks() const { return tracks_; }
  TrackId next_id() const { return next_id_; }

 private:
  TrackerConfig cfg_;
  std::vector<Track> tracks_;
  std::optional<SimTime> last_;
  TrackId next_id_ = 1;
};

/// Wire message for one perception frame.
net::Message make_tracking_message(const PerceptionFrame& frame, std::uint32_t seq);

/// Inverse of make_tracking_message; positions come back as float.
PerceptionFrame frame_from_message(const net::Message& msg);

}  // namespace smdt::rsu

#endif  // SMDT_RSU_RSU_HPP_
