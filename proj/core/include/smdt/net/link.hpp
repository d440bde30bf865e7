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

#ifndef SMDT_NET_LINK_HPP_
#define SMDT_NET_LINK_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smdt/common.hpp"
#include "smdt/net/wire.hpp"

namespace smdt::net {

enum class LinkKind { i2c_ethernet, v2c_wimax, v2i_wifi, v2i_wigig };

const char* to_string(LinkKind k);

struct LinkModel {
  LinkKind kind = LinkKind::i2c_ethernet;
  double bandwidth_bps = 1e9;
  Micros base_latency_us = 500;
  double jitter_sigma_us = 0.0;
  double loss_prob = 0.0;
  double coverage_m = kInfinity;
  /// Intervals [start, end) during which the link carries nothing.
  std::vector<std::pair<SimTime, SimTime>> outages;

  bool wireless() const { return std::isfinite(coverage_m); }
  /// Throws Error(configuration) unless bandwidth > 0 and 0 <= loss < 1.
  void validate() const;

  // Rated performance of the deployed links: wired Ethernet >= 1 Gb/s,
  // WiMAX >= 120 Mb/s over >= 50 km, Wi-Fi >= 10 Mb/s over >= 200 m,
  // WiGig >= 1 Gb/s over >= 120 m.
  static LinkModel ethernet();
  static LinkModel wimax();
  static LinkModel wifi();
  static LinkModel wigig();
};

struct LinkStats {
  std::uint64_t offered = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t dropped_out_of_range = 0;
  std::uint64_t dropped_unavailable = 0;
  std::uint64_t bytes_offered = 0;
  std::uint64_t bytes_delivered = 0;

  /// delivered / offered, or nullopt when nothing was offered.
  std::optional<double> pdr() const;
  LinkStats& operator+=(const LinkStats& o);
};

enum class DropReason { none, loss, out_of_range, unavailable };

const char* to_string(DropReason r);

struct SendResult {
  bool delivered = false;
  SimTime deliver_at;
  DropReason reason = DropReason::none;
};

/// One direction of a point-to-point link. Delivery time is queueing plus
/// serialisation plus base latency plus half-normal jitter; deliveries are
/// forced into send order.
class Link {
 public:
  Link(std::string name, LinkModel model);

  const std::string& name() const { return name_; }
  const LinkModel& model() const { return model_; }

  /// Offers `bytes` of stream `stream` at `now` between endpoints
  /// `distance_m` apart. Drops are recorded in the stats, never raised.
  SendResult send(MsgType stream, std::size_t bytes, SimTime now, double distance_m, Rng& rng);

  bool available_at(SimTime t) const;

  const LinkStats& stats() const { return total_; }
  /// Per-stream breakdown keyed by message type.
  const std::map<MsgType, LinkStats>& stream_stats() const { return streams_; }

 private:
  std::string name_;
  LinkModel model_;
  SimTime free_at_{0};
  SimTime last_delivery_{0};
  LinkStats total_;
  std::map<MsgType, LinkStats> streams_;
};

}  // namespace smdt::net

#endif  // SMDT_NET_LINK_HPP_
