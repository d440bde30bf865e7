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

#ifndef SMDT_VEHICLE_REQUISITION_HPP_
#define SMDT_VEHICLE_REQUISITION_HPP_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "smdt/net/wire.hpp"
#include "smdt/road/waypoints.hpp"

namespace smdt::vehicle {

inline constexpr double kMpsToKmh = 3.6;

/// D_thre = coeff * v_f^2 / a_comfy with v_f in km/h. Throws
/// Error(configuration) if a_comfy <= 0 or v_f < 0.
double compute_threshold_distance(double v_f_kmh, double a_comfy, double coeff = 0.039);

struct RequisitionConfig {
  double v_f = 4.1667;    // m/s
  double a_comfy = 3.048; // m/s^2
  double kmh_braking_coeff = 0.039;
  Micros response_timeout_us = 500'000;
  /// Farthest a downloaded route may lie from the pose and still be applied.
  double max_apply_offset = 5.0;

  double threshold_distance() const {
    return compute_threshold_distance(v_f * kMpsToKmh, a_comfy, kmh_braking_coeff);
  }
  void validate() const;
};

struct BrakingLimits {
  double a_comfy = 3.048;
  double a_emergency = 4.5;
};

enum class BrakeClass { at_rest, comfortable, feasible, emergency };
std::string_view to_string(BrakeClass c);

struct StopDecel {
  double decel = 0.0;
  BrakeClass classification = BrakeClass::at_rest;
};

/// v^2 / (2 d). Throws Error(infeasible_stop) when d <= 0 and v > 0.
StopDecel required_stop_decel(double v, double d, const BrakingLimits& limits = {});

struct LatencyBreakdown {
  Micros t_local = 0;
  Micros t_exe = 0;
  /// Request sent until the route file is received, download included.
  Micros t_comm = 0;
  /// Request sent until the route response (URL) is received.
  Micros t_comm_request = 0;

  Micros total() const { return t_local + t_exe + t_comm; }
};

enum class Phase { cruising, awaiting_response, downloading, applying };
std::string_view to_string(Phase p);

struct Action {
  enum class Kind { none, send_request, fetch_route, apply_route, fallback };
  Kind kind = Kind::none;
  std::uint32_t seq = 0;
  NodeId intersection = 0;
  std::string url;
  std::vector<road::Waypoint> waypoints;
  /// Set for fallback: timeout, no_route, protocol.
  std::string reason;
};

/// Route requisition as seen by one vehicle. The caller owns timing: it
/// delays send_request by T_local, calls mark_sent when the request leaves,
/// arms a timeout per exchange, and calls complete_apply T_exe after an
/// apply_route action.
class RequisitionMachine {
 public:
  explicit RequisitionMachine(RequisitionConfig cfg = {});

  /// Position check against the route the vehicle is tracking.
  Action step(Vec2 pose_estimate, const road::Route& route, const road::RoadNetwork& network,
              SimTime now);

  void mark_sent(std::uint32_t seq, SimTime now);
  Action on_response(std::uint32_t seq, net::RouteStatus status, const std::string& url,
                     SimTime now);
  /// Download request for the URL left the vehicle.
  void mark_fetch_sent(std::uint32_t seq, SimTime now);
  Action on_route_file(std::uint32_t seq, std::vector<road::Waypoint> waypoints, SimTime now);
  /// Timeout armed while the machine was in `armed_phase`. Stale timeouts
  /// are ignored.
  Action on_timeout(std::uint32_t seq, Phase armed_phase, SimTime now);
  /// Malformed or unexpected reply for the pending request.
  Action on_protocol_error(std::uint32_t seq, SimTime now);
  /// Finishes the swap and returns the request's latency.
  std::optional<LatencyBreakdown> complete_apply(std::uint32_t seq, SimTime now);

  /// New traversal of the route: every intersection may be requested again.
  void reset_traversal();

  Phase phase() const { return phase_; }
  std::uint32_t pending_seq() const { return pending_; }
  bool requested(NodeId node) const { return requested_.contains(node); }
  const RequisitionConfig& config() const { return cfg_; }
  double threshold() const { return threshold_; }

 private:
  Action fallback(std::string reason);

  RequisitionConfig cfg_;
  double threshold_;
  Phase phase_ = Phase::cruising;
  std::uint32_t pending_ = 0;
  std::uint32_t next_seq_ = 0;
  std::set<NodeId> requested_;
  SimTime triggered_, sent_, responded_, received_;
};

struct ApplyResult {
  bool accepted = false;
  /// `next` equals `current`; the caller keeps its tracking state.
  bool unchanged = false;
  std::vector<road::Waypoint> active;
  /// Path piece to resume tracking from.
  std::size_t index = 0;
  /// Distance from the pose to the nearest waypoint of `next`.
  double offset = 0.0;
};

/// Swaps to `next` and re-projects the tracking index onto it. A route whose
/// nearest waypoint is more than `max_offset` from the pose is rejected and
/// `current` stays active. Throws Error(configuration) for an empty `next`.
ApplyResult apply_route(std::span<const road::Waypoint> current,
                        std::span<const road::Waypoint> next, Vec2 pose,
                        double max_offset = 5.0);

}  // namespace smdt::vehicle

#endif  // SMDT_VEHICLE_REQUISITION_HPP_
