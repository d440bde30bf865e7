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

#include "smdt/net/link.hpp"

#include <algorithm>

namespace smdt::net {

const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::i2c_ethernet: return "I2C_ethernet";
    case LinkKind::v2c_wimax: return "V2C_wimax";
    case LinkKind::v2i_wifi: return "V2I_wifi";
    case LinkKind::v2i_wigig: return "V2I_wigig";
  }
  return "unknown";
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::none: return "none";
    case DropReason::loss: return "loss";
    case DropReason::out_of_range: return "out_of_range";
    case DropReason::unavailable: return "unavailable";
  }
  return "unknown";
}

void LinkModel::validate() const {
  if (!(bandwidth_bps > 0.0)) throw Error(Errc::configuration, "link bandwidth must be positive");
  if (!(loss_prob >= 0.0 && loss_prob < 1.0)) {
    throw Error(Errc::configuration, "link loss_prob must lie in [0, 1)");
  }
  if (base_latency_us < 0 || jitter_sigma_us < 0.0) {
    throw Error(Errc::configuration, "link latency and jitter must be non-negative");
  }
  if (!(coverage_m > 0.0)) throw Error(Errc::configuration, "link coverage must be positive");
}

LinkModel LinkModel::ethernet() { return {LinkKind::i2c_ethernet, 1e9, 300, 50.0, 0.0, kInfinity, {}}; }
LinkModel LinkModel::wimax() { return {LinkKind::v2c_wimax, 120e6, 10'000, 1'500.0, 0.0, 50'000.0, {}}; }
LinkModel LinkModel::wifi() { return {LinkKind::v2i_wifi, 10e6, 2'000, 500.0, 0.0, 200.0, {}}; }
LinkModel LinkModel::wigig() { return {LinkKind::v2i_wigig, 1e9, 500, 100.0, 0.0, 120.0, {}}; }

std::optional<double> LinkStats::pdr() const {
  if (offered == 0) return std::nullopt;
  return static_cast<double>(delivered) / static_cast<double>(offered);
}

LinkStats& LinkStats::operator+=(const LinkStats& o) {
  offered += o.offered;
  delivered += o.delivered;
  dropped += o.dropped;
  dropped_out_of_range += o.dropped_out_of_range;
  dropped_unavailable += o.dropped_unavailable;
  bytes_offered += o.bytes_offered;
  bytes_delivered += o.bytes_delivered;
  return *this;
}

Link::Link(std::string name, LinkModel model) : name_(std::move(name)), model_(std::move(model)) {
  model_.validate();
}

bool Link::available_at(SimTime t) const {
  return std::none_of(model_.outages.begin(), model_.outages.end(),
                      [t](const auto& w) { return t >= w.first && t < w.second; });
}

SendResult Link::send(MsgType stream, std::size_t bytes, SimTime now, double distance_m, Rng& rng) {
  LinkStats& s = streams_[stream];
  auto record = [&](auto&& fn) {
    fn(total_);
    fn(s);
  };
  record([&](LinkStats& st) {
    ++st.offered;
    st.bytes_offered += bytes;
  });

  SendResult out;
  if (!available_at(now)) {
    out.reason = DropReason::unavailable;
  } else if (model_.wireless() && distance_m > model_.coverage_m) {
    out.reason = DropReason::out_of_range;
  } else if (model_.loss_prob > 0.0 && rng.bernoulli(model_.loss_prob)) {
    out.reason = DropReason::loss;
  }
  if (out.reason != DropReason::none) {
    record([&](LinkStats& st) {
      ++st.dropped;
      if (out.reason == DropReason::out_of_range) ++st.dropped_out_of_range;
      if (out.reason == DropReason::unavailable) ++st.dropped_unavailable;
    });
    return out;
  }

  const auto serialization =
      static_cast<Micros>(std::llround(static_cast<double>(bytes) * 8.0 / model_.bandwidth_bps * 1e6));
  const SimTime tx_start = std::max(now, free_at_);
  free_at_ = tx_start + serialization;
  Micros jitter = 0;
  if (model_.jitter_sigma_us > 0.0) {
    jitter = static_cast<Micros>(std::llround(std::abs(rng.normal(0.0, model_.jitter_sigma_us))));
  }
  out.deliver_at = std::max(free_at_ + model_.base_latency_us + jitter, last_delivery_);
  last_delivery_ = out.deliver_at;
  out.delivered = true;
  record([&](LinkStats& st) {
    ++st.delivered;
    st.bytes_delivered += bytes;
  });
  return out;
}

}  // namespace smdt::net
