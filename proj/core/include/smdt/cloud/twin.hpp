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

#ifndef SMDT_CLOUD_TWIN_HPP_
#define SMDT_CLOUD_TWIN_HPP_

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "smdt/road/routing.hpp"
#include "smdt/rsu/rsu.hpp"

namespace smdt::cloud {

struct CongestionConfig {
  std::uint32_t occupancy_threshold = 3;
  double penalty_factor = 10.0;
  double lateral_bound = 3.0;            // m
  Micros staleness_window_us = 200'000;
  double fusion_gate = 1.0;              // m
  /// Fused objects this close to the last reported ego position are the
  /// ego itself and are left out of occupancy.
  double ego_exclusion_radius = 2.5;     // m

  void validate() const;
};

struct GlobalObject {
  std::uint64_t fused_id = 0;
  world::ActorClass object_class = world::ActorClass::other;
  Vec2 position;
  Vec2 velocity;
  std::vector<RsuId> sources;
  SimTime timestamp;
};

struct DtSnapshot {
  SimTime time;
  std::vector<GlobalObject> objects;
  std::map<SegmentId, std::uint32_t> occupancy;
  std::map<SegmentId, bool> congested;
  std::vector<RsuId> stale_rsus;

  std::vector<SegmentId> congested_segments() const;
};

/// RSU-frame point to the global frame: Rot(yaw) * rel + (x, y).
Vec2 to_global(const Pose2& rsu, Vec2 rel);
/// Inverse of to_global.
Vec2 to_relative(const Pose2& rsu, Vec2 global);
/// Velocities only rotate.
Vec2 rotate_to_global(const Pose2& rsu, Vec2 rel_velocity);

using FrameBuffers = std::map<RsuId, std::deque<rsu::PerceptionFrame>>;

struct SyncResult {
  std::vector<rsu::PerceptionFrame> frames;
  std::vector<RsuId> stale;
};

/// Picks, per RSU, the newest buffered frame no older than the staleness
/// window. RSUs without such a frame are reported stale.
SyncResult sync_channels(const FrameBuffers& buffers, SimTime now, const CongestionConfig& cfg);

/// Moves every track to the global frame and greedily merges same-class
/// objects from different RSUs whose positions lie within `fusion_gate`.
/// Tracks are visited in (rsu_id, track_id) order; a fused object keeps the
/// id (rsu_id << 32 | track_id) of its first member.
std::vector<GlobalObject> fuse(const std::vector<rsu::PerceptionFrame>& frames,
                               const std::map<RsuId, rsu::RsuConfig>& rsus, double fusion_gate);

struct Occupancy {
  std::map<SegmentId, std::uint32_t> counts;
  std::map<SegmentId, bool> congested;
};

Occupancy segment_occupancy(const std::vector<GlobalObject>& objects, const road::RoadNetwork& network,
                            const CongestionConfig& cfg, std::optional<Vec2> ego_position = {});

/// length(s), multiplied by penalty_factor when s is congested.
road::SegmentWeights congestion_weights(const road::RoadNetwork& network,
                                        const std::map<SegmentId, bool>& congested,
                                        const CongestionConfig& cfg);

}  // namespace smdt::cloud

#endif  // SMDT_CLOUD_TWIN_HPP_
