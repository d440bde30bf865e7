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
#include <tuple>

#include "smdt/rsu/rsu.hpp"

namespace smdt::rsu {

std::vector<Track> Tracker::update(const std::vector<Detection>& detections, SimTime timestamp) {
  if (last_ && timestamp <= *last_) {
    throw Error(Errc::fault, "tracker timestamps must increase (got " + std::to_string(timestamp.us) +
                                 " after " + std::to_string(last_->us) + ")");
  }
  const double dt = last_ ? (timestamp - *last_) * 1e-6 : 0.0;
  last_ = timestamp;

  for (Track& t : tracks_) t.rel = t.rel + t.velocity * dt;

  struct Candidate {
    double dist;
    TrackId track;
    std::size_t track_index;
    std::size_t detection;
  };
  std::vector<Candidate> pairs;
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    for (std::size_t j = 0; j < detections.size(); ++j) {
      if (tracks_[i].object_class != detections[j].object_class) continue;
      const double d = distance(tracks_[i].rel, detections[j].rel);
      if (d <= cfg_.gate_radius) pairs.push_back({d, tracks_[i].id, i, j});
    }
  }
  std::ranges::sort(pairs, [](const Candidate& a, const Candidate& b) {
    return std::tie(a.dist, a.track, a.detection) < std::tie(b.dist, b.track, b.detection);
  });

  std::vector<bool> track_used(tracks_.size(), false);
  std::vector<bool> det_used(detections.size(), false);
  for (const Candidate& c : pairs) {
    if (track_used[c.track_index] || det_used[c.detection]) continue;
    track_used[c.track_index] = det_used[c.detection] = true;
    Track& t = tracks_[c.track_index];
    const Detection& z = detections[c.detection];
    const Vec2 residual = z.rel - t.rel;
    t.rel = t.rel + residual * cfg_.alpha;
    if (dt > 0.0) t.velocity = t.velocity + residual * (cfg_.beta / dt);
    t.bbox = z.bbox;
    t.misses = 0;
    ++t.age;
  }

  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    if (!track_used[i]) {
      ++tracks_[i].misses;
      ++tracks_[i].age;
    }
  }
  std::erase_if(tracks_, [&](const Track& t) { return t.misses > cfg_.max_misses; });

  for (std::size_t j = 0; j < detections.size(); ++j) {
    if (det_used[j]) continue;
    const Detection& z = detections[j];
    tracks_.push_back(Track{next_id_++, z.object_class, z.rel, {}, z.bbox, 1, 0});
  }
  return tracks_;
}

}  // namespace smdt::rsu
