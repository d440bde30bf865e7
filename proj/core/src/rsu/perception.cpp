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

#include "smdt/rsu/rsu.hpp"

namespace smdt::rsu {

net::Message make_tracking_message(const PerceptionFrame& frame, std::uint32_t seq) {
  net::TrackingPayload payload;
  payload.objects.reserve(frame.tracks.size());
  for (const Track& t : frame.tracks) {
    const double speed = t.velocity.norm();
    net::TrackRecord r;
    r.id = t.id;
    r.object_class = t.object_class;
    r.x = static_cast<float>(t.rel.x);
    r.y = static_cast<float>(t.rel.y);
    r.z = 0.0F;
    r.vx = static_cast<float>(t.velocity.x);
    r.vy = static_cast<float>(t.velocity.y);
    r.length = static_cast<float>(t.bbox.length);
    r.width = static_cast<float>(t.bbox.width);
    r.height = static_cast<float>(t.bbox.height);
    r.yaw = speed > 0.1 ? static_cast<float>(std::atan2(t.velocity.y, t.velocity.x)) : 0.0F;
    payload.objects.push_back(r);
  }
  return net::Message{frame.rsu_id, seq, static_cast<std::uint64_t>(frame.timestamp.us),
                      std::move(payload)};
}

PerceptionFrame frame_from_message(const net::Message& msg) {
  const auto* payload = std::get_if<net::TrackingPayload>(&msg.payload);
  if (payload == nullptr) throw Error(Errc::protocol, "not a tracking message");
  PerceptionFrame f;
  f.rsu_id = msg.source_id;
  f.timestamp = SimTime{static_cast<std::int64_t>(msg.timestamp_us)};
  for (const net::TrackRecord& r : payload->objects) {
    f.tracks.push_back(Track{r.id, r.object_class, {r.x, r.y}, {r.vx, r.vy},
                             {r.length, r.width, r.height}, 0, 0});
  }
  return f;
}

}  // namespace smdt::rsu
