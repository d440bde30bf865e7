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

#include <cmath>

#include <gtest/gtest.h>

#include "smdt/road/waypoints.hpp"
#include "smdt/vehicle/requisition.hpp"
#include "support.hpp"

namespace smdt::vehicle {
namespace {

using smdt::testing::square_network;

// ---------------------------------------------------------------------------
// Threshold distance and braking
// ---------------------------------------------------------------------------

TEST(ThresholdDistance, FormulaValues) {
  EXPECT_NEAR(compute_threshold_distance(15, 3.048), 0.039 * 225 / 3.048, 1e-12);
  EXPECT_NEAR(compute_threshold_distance(15, 3.048), 2.8789, 1e-3);
  EXPECT_EQ(compute_threshold_distance(0, 3.048), 0.0);
  EXPECT_NEAR(compute_threshold_distance(30, 3.048), 11.516, 1e-3);
  EXPECT_THROW(compute_threshold_distance(15, 0.0), Error);
  EXPECT_NEAR(RequisitionConfig{}.threshold_distance(), 2.879, 1e-3);
}

TEST(StopDecel, FormulaAndClasses) {
  const StopDecel typical = required_stop_decel(4.1667, 2.4);
  EXPECT_NEAR(typical.decel, 4.1667 * 4.1667 / 4.8, 1e-12);
  EXPECT_NEAR(typical.decel, 3.62, 0.005);
  EXPECT_EQ(typical.classification, BrakeClass::feasible);
  EXPECT_EQ(required_stop_decel(0.0, 3.0).classification, BrakeClass::at_rest);
  EXPECT_EQ(required_stop_decel(0.0, 3.0).decel, 0.0);
  const StopDecel hard = required_stop_decel(4.1667, 0.1);
  EXPECT_NEAR(hard.decel, 86.8, 0.01);
  EXPECT_EQ(hard.classification, BrakeClass::emergency);
  EXPECT_EQ(required_stop_decel(2.0, 2.0).classification, BrakeClass::comfortable);
  try {
    required_stop_decel(1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::infeasible_stop);
  }
}

// ---------------------------------------------------------------------------
// Requisition state machine
// ---------------------------------------------------------------------------

class Requisition : public ::testing::Test {
 protected:
  road::RoadNetwork net = square_network();
  road::Route route = road::shortest_route(net, 0, 5, road::length_weights(net), road::Algorithm::astar);
  RequisitionMachine m;
};

TEST_F(Requisition, TriggersOnceInsideThreshold) {
  EXPECT_EQ(m.step({-5.0, 0}, route, net, SimTime{0}).kind, Action::Kind::none);
  const Action a = m.step({-2.8, 0}, route, net, SimTime{1000});
  EXPECT_EQ(a.kind, Action::Kind::send_request);
  EXPECT_EQ(a.intersection, 1u);
  EXPECT_EQ(m.phase(), Phase::awaiting_response);
  EXPECT_EQ(m.step({-2.7, 0}, route, net, SimTime{2000}).kind, Action::Kind::none);
  EXPECT_TRUE(m.requested(1));
}

TEST_F(Requisition, FullExchangeSumsLatency) {
  const Action a = m.step({-2.8, 0}, route, net, SimTime{0});
  m.mark_sent(a.seq, SimTime{10'000});
  const Action f = m.on_response(a.seq, net::RouteStatus::ok, "route://cloud/1/1", SimTime{40'000});
  ASSERT_EQ(f.kind, Action::Kind::fetch_route);
  EXPECT_EQ(f.url, "route://cloud/1/1");
  m.mark_fetch_sent(a.seq, SimTime{40'000});
  const std::vector<road::Waypoint> wps{{-60, 0, 0, 0, 4}, {0, 0, 0, 0, 4}};
  const Action apply = m.on_route_file(a.seq, wps, SimTime{70'000});
  ASSERT_EQ(apply.kind, Action::Kind::apply_route);
  EXPECT_EQ(apply.waypoints, wps);
  const auto lat = m.complete_apply(a.seq, SimTime{90'000});
  ASSERT_TRUE(lat);
  EXPECT_EQ(lat->t_local, 10'000);
  EXPECT_EQ(lat->t_comm, 60'000);
  EXPECT_EQ(lat->t_comm_request, 30'000);
  EXPECT_EQ(lat->t_exe, 20'000);
  EXPECT_EQ(lat->total(), 90'000);
  EXPECT_EQ(m.phase(), Phase::cruising);
  // Same intersection is not requested again on this traversal.
  EXPECT_EQ(m.step({-1.0, 0}, route, net, SimTime{100'000}).kind, Action::Kind::none);
  m.reset_traversal();
  EXPECT_EQ(m.step({-1.0, 0}, route, net, SimTime{200'000}).kind, Action::Kind::send_request);
}

TEST_F(Requisition, TimeoutFallsBack) {
  const Action a = m.step({-2.8, 0}, route, net, SimTime{0});
  m.mark_sent(a.seq, SimTime{0});
  const Action f = m.on_timeout(a.seq, Phase::awaiting_response, SimTime{500'000});
  EXPECT_EQ(f.kind, Action::Kind::fallback);
  EXPECT_EQ(f.reason, "timeout");
  EXPECT_EQ(m.phase(), Phase::cruising);
  // A late reply is ignored.
  EXPECT_EQ(m.on_response(a.seq, net::RouteStatus::ok, "u", SimTime{600'000}).kind, Action::Kind::none);
}

TEST_F(Requisition, StaleTimeoutIsIgnored) {
  const Action a = m.step({-2.8, 0}, route, net, SimTime{0});
  m.on_response(a.seq, net::RouteStatus::ok, "u", SimTime{30'000});
  EXPECT_EQ(m.on_timeout(a.seq, Phase::awaiting_response, SimTime{500'000}).kind, Action::Kind::none);
  EXPECT_EQ(m.phase(), Phase::downloading);
}

TEST_F(Requisition, BadRepliesFallBack) {
  Action a = m.step({-2.8, 0}, route, net, SimTime{0});
  EXPECT_EQ(m.on_response(a.seq, net::RouteStatus::no_route, "", SimTime{1}).reason, "no_route");
  m.reset_traversal();
  a = m.step({-2.8, 0}, route, net, SimTime{2});
  EXPECT_EQ(m.on_response(a.seq, net::RouteStatus::ok, "", SimTime{3}).reason, "protocol");
  m.reset_traversal();
  a = m.step({-2.8, 0}, route, net, SimTime{4});
  EXPECT_EQ(m.on_protocol_error(a.seq, SimTime{5}).kind, Action::Kind::fallback);
}

TEST_F(Requisition, OffRoutePoseDoesNothing) {
  EXPECT_EQ(m.step({100, 100}, route, net, SimTime{0}).kind, Action::Kind::none);
}

// ---------------------------------------------------------------------------
// Route application
// ---------------------------------------------------------------------------

TEST(ApplyRoute, IdenticalRouteIsIdempotent) {
  const auto net = square_network();
  const auto wps = road::route_to_waypoints(
      road::shortest_route(net, 0, 5, road::length_weights(net), road::Algorithm::astar), 1.0, net);
  const ApplyResult once = apply_route(wps, wps, {-2.4, 0.05});
  EXPECT_TRUE(once.accepted);
  EXPECT_TRUE(once.unchanged);
  const ApplyResult twice = apply_route(once.active, wps, {-2.4, 0.05});
  EXPECT_EQ(twice.active, once.active);
  EXPECT_EQ(twice.index, once.index);
}

TEST(ApplyRoute, DetourResumesNearPose) {
  const auto net = square_network();
  const auto straight = road::route_to_waypoints(road::route_from_segments(net, {1, 2, 3}), 1.0, net);
  const auto detour = road::route_to_waypoints(road::route_from_segments(net, {1, 4, 5, 6, 3}), 1.0, net);
  const ApplyResult r = apply_route(straight, detour, {-2.4, 0.0});
  ASSERT_TRUE(r.accepted);
  EXPECT_FALSE(r.unchanged);
  EXPECT_EQ(r.active, detour);
  EXPECT_LE(detour[r.index].x, -2.4);
  EXPECT_GE(detour[r.index + 1].x, -2.4);
  EXPECT_NEAR(r.offset, 0.4, 1e-9);
}

TEST(ApplyRoute, DistantRouteIsRejected) {
  const std::vector<road::Waypoint> current{{0, 0, 0, 0, 1}, {1, 0, 0, 0, 1}};
  const std::vector<road::Waypoint> far{{0, 10, 0, 0, 1}, {1, 10, 0, 0, 1}};
  const ApplyResult r = apply_route(current, far, {0.5, 0});
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.active, current);
  EXPECT_THROW(apply_route(current, {}, {0, 0}), Error);
}

}  // namespace
}  // namespace smdt::vehicle
