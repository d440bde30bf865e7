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

#include "smdt/vehicle/requisition.hpp"

#include <algorithm>
#include <cmath>

namespace smdt::vehicle {

double compute_threshold_distance(double v_f_kmh, double a_comfy, double coeff) {
  if (!(a_comfy > 0.0)) throw Error(Errc::configuration, "a_comfy must be positive");
  if (!(v_f_kmh >= 0.0)) throw Error(Errc::configuration, "free-flow speed must be non-negative");
  return coeff * v_f_kmh * v_f_kmh / a_comfy;
}

void RequisitionConfig::validate() const {
  if (!(v_f >= 0.0)) throw Error(Errc::configuration, "requisition.v_f must be non-negative");
  if (!(a_comfy > 0.0)) throw Error(Errc::configuration, "requisition.a_comfy must be positive");
  if (!(kmh_braking_coeff > 0.0)) {
    throw Error(Errc::configuration, "requisition.kmh_braking_coeff must be positive");
  }
  if (response_timeout_us <= 0) {
    throw Error(Errc::configuration, "requisition.response_timeout_ms must be positive");
  }
  if (!(max_apply_offset > 0.0)) {
    throw Error(Errc::configuration, "requisition.max_apply_offset must be positive");
  }
}

std::string_view to_string(BrakeClass c) {
  switch (c) {
    case BrakeClass::at_rest: return "at_rest";
    case BrakeClass::comfortable: return "comfortable";
    case BrakeClass::feasible: return "feasible";
    case BrakeClass::emergency: return "emergency";
  }
  return "?";
}

StopDecel required_stop_decel(double v, double d, const BrakingLimits& limits) {
  if (v <= 0.0) return {0.0, BrakeClass::at_rest};
  if (!(d > 0.0)) throw Error(Errc::infeasible_stop, "no distance left to stop");
  const double a = v * v / (2.0 * d);
  BrakeClass c = BrakeClass::emergency;
  if (a <= limits.a_comfy) {
    c = BrakeClass::comfortable;
  } else if (a < limits.a_emergency) {
    c = BrakeClass::feasible;
  }
  return {a, c};
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::cruising: return "cruising";
    case Phase::awaiting_response: return "awaiting_response";
    case Phase::downloading: return "downloading";
    case Phase::applying: return "applying";
  }
  return "?";
}

RequisitionMachine::RequisitionMachine(RequisitionConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  threshold_ = cfg_.threshold_distance();
}

Action RequisitionMachine::step(Vec2 pose_estimate, const road::Route& route,
                                const road::RoadNetwork& network, SimTime now) {
  if (phase_ != Phase::cruising) return {};
  std::optional<road::IntersectionAhead> next;
  try {
    next = road::next_intersection(pose_estimate, route, network);
  } catch (const Error& e) {
    if (e.code() == Errc::off_route) return {};
    throw;
  }
  if (!next || next->distance > threshold_ || requested_.contains(next->node)) return {};

  requested_.insert(next->node);
  phase_ = Phase::awaiting_response;
  pending_ = ++next_seq_;
  triggered_ = now;
  sent_ = responded_ = received_ = now;
  Action a;
  a.kind = Action::Kind::send_request;
  a.seq = pending_;
  a.intersection = next->node;
  return a;
}

void RequisitionMachine::mark_sent(std::uint32_t seq, SimTime now) {
  if (seq == pending_ && phase_ == Phase::awaiting_response) sent_ = now;
}

Action RequisitionMachine::on_response(std::uint32_t seq, net::RouteStatus status,
                                       const std::string& url, SimTime now) {
  if (seq != pending_ || phase_ != Phase::awaiting_response) return {};
  responded_ = now;
  if (status != net::RouteStatus::ok) {
    return fallback(status == net::RouteStatus::no_route ? "no_route" : "not_found");
  }
  if (url.empty()) return fallback("protocol");
  phase_ = Phase::downloading;
  Action a;
  a.kind = Action::Kind::fetch_route;
  a.seq = seq;
  a.url = url;
  return a;
}

void RequisitionMachine::mark_fetch_sent(std::uint32_t, SimTime) {}

Action RequisitionMachine::on_route_file(std::uint32_t seq, std::vector<road::Waypoint> waypoints,
                                         SimTime now) {
  if (seq != pending_ || phase_ != Phase::downloading) return {};
  if (waypoints.empty()) return fallback("protocol");
  received_ = now;
  phase_ = Phase::applying;
  Action a;
  a.kind = Action::Kind::apply_route;
  a.seq = seq;
  a.waypoints = std::move(waypoints);
  return a;
}

Action RequisitionMachine::on_timeout(std::uint32_t seq, Phase armed_phase, SimTime) {
  if (seq != pending_ || phase_ != armed_phase) return {};
  if (phase_ != Phase::awaiting_response && phase_ != Phase::downloading) return {};
  return fallback("timeout");
}

Action RequisitionMachine::on_protocol_error(std::uint32_t seq, SimTime) {
  if (seq != pending_ || phase_ == Phase::cruising) return {};
  return fallback("protocol");
}

std::optional<LatencyBreakdown> RequisitionMachine::complete_apply(std::uint32_t seq, SimTime now) {
  if (seq != pending_ || phase_ != Phase::applying) return std::nullopt;
  phase_ = Phase::cruising;
  LatencyBreakdown b;
  b.t_local = sent_ - triggered_;
  b.t_comm = received_ - sent_;
  b.t_comm_request = responded_ - sent_;
  b.t_exe = now - received_;
  return b;
}

void RequisitionMachine::reset_traversal() {
  requested_.clear();
  phase_ = Phase::cruising;
  // Replies to an abandoned request must not match.
  pending_ = ++next_seq_;
}

Action RequisitionMachine::fallback(std::string reason) {
  Action a;
  a.kind = Action::Kind::fallback;
  a.seq = pending_;
  a.reason = std::move(reason);
  phase_ = Phase::cruising;
  return a;
}

ApplyResult apply_route(std::span<const road::Waypoint> current,
                        std::span<const road::Waypoint> next, Vec2 pose, double max_offset) {
  if (next.empty()) throw Error(Errc::configuration, "cannot apply an empty route");
  ApplyResult out;
  std::size_t nearest = 0;
  double best = kInfinity;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double d = distance(pose, next[i].position());
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  out.offset = best;
  if (best > max_offset) {
    out.active.assign(current.begin(), current.end());
    return out;
  }
  out.accepted = true;
  out.unchanged = std::equal(current.begin(), current.end(), next.begin(), next.end());
  out.active.assign(next.begin(), next.end());
  // Resume on the piece the pose projects onto: the one ending at the
  // nearest waypoint when the pose has not reached it yet.
  if (nearest > 0) {
    const Vec2 a = next[nearest - 1].position();
    const Vec2 b = next[nearest].position();
    if ((pose - b).dot(a - b) > 0.0) --nearest;
  }
  out.index = std::min(nearest, next.size() > 1 ? next.size() - 2 : 0);
  return out;
}

}  // namespace smdt::vehicle
