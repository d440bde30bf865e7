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

#include <algorithm>
#include <string>

namespace smdt::cloud {

void CongestionConfig::validate() const {
  if (occupancy_threshold < 1) throw Error(Errc::configuration, "occupancy_threshold must be >= 1");
  if (!(penalty_factor >= 1.0)) throw Error(Errc::configuration, "penalty_factor must be >= 1");
  if (!(lateral_bound > 0.0)) throw Error(Errc::configuration, "lateral_bound must be > 0");
  if (staleness_window_us <= 0) throw Error(Errc::configuration, "staleness_window must be > 0");
  if (!(fusion_gate > 0.0)) throw Error(Errc::configuration, "fusion_gate must be > 0");
}

std::vector<SegmentId> DtSnapshot::congested_segments() const {
  std::vector<SegmentId> out;
  for (const auto& [id, flag] : congested) {
    if (flag) out.push_back(id);
  }
  return out;
}

SyncResult sync_channels(const FrameBuffers& buffers, SimTime now, const CongestionConfig& cfg) {
  SyncResult out;
  const SimTime oldest = now - cfg.staleness_window_us;
  for (const auto& [rsu_id, frames] : buffers) {
    const rsu::PerceptionFrame* latest = nullptr;
    for (const rsu::PerceptionFrame& f : frames) {
      if (f.timestamp >= oldest && f.timestamp <= now &&
          (latest == nullptr || f.timestamp > latest->timestamp)) {
        latest = &f;
      }
    }
    if (latest != nullptr) {
      out.frames.push_back(*latest);
    } else {
      out.stale.push_back(rsu_id);
    }
  }
  return out;
}

std::vector<GlobalObject> fuse(const std::vector<rsu::PerceptionFrame>& frames,
                               const std::map<RsuId, rsu::RsuConfig>& rsus, double fusion_gate) {
  struct Item {
    RsuId rsu;
    const rsu::Track* track;
    SimTime stamp;
  };
  std::vector<Item> items;
  for (const rsu::PerceptionFrame& f : frames) {
    for (const rsu::Track& t : f.tracks) items.push_back({f.rsu_id, &t, f.timestamp});
  }
  std::ranges::sort(items, [](const Item& a, const Item& b) {
    return a.rsu != b.rsu ? a.rsu < b.rsu : a.track->id < b.track->id;
  });

  struct Cluster {
    GlobalObject obj;
    Vec2 position_sum;
    Vec2 velocity_sum;
  };
  std::vector<Cluster> clusters;
  for (const Item& it : items) {
    auto cfg = rsus.find(it.rsu);
    if (cfg == rsus.end()) {
      throw Error(Errc::configuration, "frame from unknown rsu " + std::to_string(it.rsu));
    }
    const Vec2 pos = to_global(cfg->second.pose, it.track->rel);
    const Vec2 vel = rotate_to_global(cfg->second.pose, it.track->velocity);

    Cluster* best = nullptr;
    double best_d = kInfinity;
    for (Cluster& c : clusters) {
      if (c.obj.object_class != it.track->object_class) continue;
      if (std::ranges::find(c.obj.sources, it.rsu) != c.obj.sources.end()) continue;
      const double d = distance(c.obj.position, pos);
      if (d <= fusion_gate && d < best_d) {
        best = &c;
        best_d = d;
      }
    }
    if (best == nullptr) {
      GlobalObject obj;
      obj.fused_id = (static_cast<std::uint64_t>(it.rsu) << 32) | it.track->id;
      obj.object_class = it.track->object_class;
      obj.position = pos;
      obj.velocity = vel;
      obj.sources = {it.rsu};
      obj.timestamp = it.stamp;
      clusters.push_back({obj, pos, vel});
      continue;
    }
    best->obj.sources.push_back(it.rsu);
    best->position_sum = best->position_sum + pos;
    best->velocity_sum = best->velocity_sum + vel;
    const double n = static_cast<double>(best->obj.sources.size());
    best->obj.position = best->position_sum * (1.0 / n);
    best->obj.velocity = best->velocity_sum * (1.0 / n);
    best->obj.timestamp = std::max(best->obj.timestamp, it.stamp);
  }

  std::vector<GlobalObject> out;
  out.reserve(clusters.size());
  for (Cluster& c : clusters) out.push_back(std::move(c.obj));
  return out;
}

Occupancy segment_occupancy(const std::vector<GlobalObject>& objects, const road::RoadNetwork& network,
                            const CongestionConfig& cfg, std::optional<Vec2> ego_position) {
  Occupancy out;
  for (const road::Segment& s : network.segments()) out.counts[s.id] = 0;
  if (!network.empty()) {
    for (const GlobalObject& o : objects) {
      if (ego_position && distance(o.position, *ego_position) <= cfg.ego_exclusion_radius) continue;
      const road::SegmentProjection p = road::project_to_segment(o.position, network);
      if (p.lateral_distance <= cfg.lateral_bound) ++out.counts[p.segment_id];
    }
  }
  for (const auto& [id, n] : out.counts) out.congested[id] = n >= cfg.occupancy_threshold;
  return out;
}

road::SegmentWeights congestion_weights(const road::RoadNetwork& network,
                                        const std::map<SegmentId, bool>& congested,
                                        const CongestionConfig& cfg) {
  road::SegmentWeights w;
  for (const road::Segment& s : network.segments()) {
    auto it = congested.find(s.id);
    const bool jammed = it != congested.end() && it->second;
    w[s.id] = jammed ? s.length * cfg.penalty_factor : s.length;
  }
  return w;
}

}  // namespace smdt::cloud
