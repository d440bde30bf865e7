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
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "smdt/road/waypoints.hpp"
#include "support.hpp"

namespace smdt::road {
namespace {

using smdt::testing::square_network;

TEST(RoadNetwork, RejectsBrokenGeometry) {
  std::vector<Node> nodes{{1, {0, 0}}, {2, {10, 0}}};
  EXPECT_THROW(RoadNetwork(nodes, {Segment::make(1, 1, 3, {{0, 0}, {10, 0}}, 1.0)}), Error);
  EXPECT_THROW(RoadNetwork(nodes, {Segment::make(1, 1, 2, {{0, 0}, {9, 0}}, 1.0)}), Error);
  EXPECT_THROW(RoadNetwork(nodes, {Segment::make(1, 1, 2, {{0, 0}, {10, 0}}, 0.0)}), Error);
  EXPECT_THROW(RoadNetwork(nodes, {Segment::make(1, 1, 2, {{0, 0}, {10, 0}}, 1.0),
                                   Segment::make(1, 2, 1, {{10, 0}, {0, 0}}, 1.0)}),
               Error);
  Segment bad = Segment::make(1, 1, 2, {{0, 0}, {10, 0}}, 1.0);
  bad.length = 12.0;
  EXPECT_THROW(RoadNetwork(nodes, {bad}), Error);
}

TEST(RoadNetwork, IntersectionsAreDegreeThree) {
  const RoadNetwork net = square_network();
  EXPECT_FALSE(net.is_intersection(0));
  EXPECT_TRUE(net.is_intersection(1));
  EXPECT_TRUE(net.is_intersection(2));
  EXPECT_FALSE(net.is_intersection(3));
  EXPECT_FALSE(net.is_intersection(4));
  EXPECT_FALSE(net.is_intersection(5));
}

TEST(Projection, MidpointAndLateralOffset) {
  const RoadNetwork net({{1, {0, 0}}, {2, {100, 0}}}, {Segment::make(9, 1, 2, {{0, 0}, {100, 0}}, 1.0)});
  auto p = project_to_segment({50, 0}, net);
  EXPECT_EQ(p.segment_id, 9u);
  EXPECT_DOUBLE_EQ(p.longitudinal_offset, 50.0);
  EXPECT_DOUBLE_EQ(p.lateral_distance, 0.0);
  p = project_to_segment({50, 1}, net);
  EXPECT_DOUBLE_EQ(p.longitudinal_offset, 50.0);
  EXPECT_DOUBLE_EQ(p.lateral_distance, 1.0);
}

TEST(Projection, TieGoesToLowestId) {
  const RoadNetwork net({{1, {0, 2}}, {2, {10, 2}}, {3, {0, -2}}, {4, {10, -2}}},
                        {Segment::make(7, 1, 2, {{0, 2}, {10, 2}}, 1.0),
                         Segment::make(3, 3, 4, {{0, -2}, {10, -2}}, 1.0)});
  const auto p = project_to_segment({5, 0}, net);
  EXPECT_EQ(p.segment_id, 3u);
  EXPECT_DOUBLE_EQ(p.lateral_distance, 2.0);
}

TEST(Projection, EmptyNetworkIsConfigurationError) {
  try {
    project_to_segment({0, 0}, RoadNetwork{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::configuration);
  }
}

TEST(Projection, MatchesDenseSamplingOracle) {
  Rng rng(7);
  const std::vector<Vec2> line{{0, 0}, {10, 0}, {10, 10}, {25, 18}};
  const double total = 10.0 + 10.0 + 17.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 p{rng.uniform(-5, 30), rng.uniform(-5, 25)};
    double best = kInfinity;
    for (int k = 0; k <= 40000; ++k) {
      best = std::min(best, distance(p, point_at_offset(line, total * k / 40000.0)));
    }
    EXPECT_NEAR(project_to_polyline(p, line).distance, best, 2e-3);
  }
}

TEST(Routing, SingleEdge) {
  const RoadNetwork net({{1, {0, 0}}, {2, {200, 0}}}, {Segment::make(1, 1, 2, {{0, 0}, {200, 0}}, 1.0)});
  const Route r = shortest_route(net, 1, 2, length_weights(net), Algorithm::dijkstra);
  EXPECT_EQ(r.nodes, (std::vector<NodeId>{1, 2}));
  EXPECT_DOUBLE_EQ(r.total_cost, 200.0);
}

TEST(Routing, SquareDirectThenDetourUnderPenalty) {
  const RoadNetwork net = square_network();
  SegmentWeights w = length_weights(net);
  for (Algorithm a : {Algorithm::dijkstra, Algorithm::astar}) {
    EXPECT_EQ(shortest_route(net, 1, 2, w, a).nodes, (std::vector<NodeId>{1, 2}));
  }
  w[2] *= 10.0;
  for (Algorithm a : {Algorithm::dijkstra, Algorithm::astar}) {
    const Route r = shortest_route(net, 1, 2, w, a);
    EXPECT_EQ(r.nodes, (std::vector<NodeId>{1, 3, 4, 2}));
    EXPECT_DOUBLE_EQ(r.total_cost, 600.0);
  }
}

TEST(Routing, ErrorsAndTrivialRoute) {
  const RoadNetwork net = square_network();
  const SegmentWeights w = length_weights(net);
  EXPECT_EQ(shortest_route(net, 2, 2, w, Algorithm::astar).nodes, (std::vector<NodeId>{2}));
  try {
    shortest_route(net, 5, 0, w, Algorithm::astar);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_route);
  }
  try {
    shortest_route(net, 0, 99, w, Algorithm::astar);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::configuration);
  }
  SegmentWeights bad = w;
  bad[3] = 0.0;
  EXPECT_THROW(shortest_route(net, 0, 5, bad, Algorithm::dijkstra), Error);
}

TEST(Routing, AgreesWithExhaustiveEnumerationOnRandomGraphs) {
  EXPECT_EQ(smdt::testing::routing_mismatches(2024, 100, 8), 0);
}

TEST(Waypoints, StraightSegment) {
  const RoadNetwork net({{1, {0, 0}}, {2, {10, 0}}}, {Segment::make(1, 1, 2, {{0, 0}, {10, 0}}, 4.167)});
  const auto wps = route_to_waypoints(route_from_segments(net, {1}), 1.0, net);
  ASSERT_EQ(wps.size(), 11u);
  for (std::size_t i = 0; i < wps.size(); ++i) {
    EXPECT_NEAR(wps[i].x, static_cast<double>(i), 1e-12);
    EXPECT_EQ(wps[i].yaw, 0.0);
    EXPECT_EQ(wps[i].velocity, 4.167);
  }
}

TEST(Waypoints, ShortSegmentKeepsBothEnds) {
  const RoadNetwork net({{1, {0, 0}}, {2, {0.5, 0}}}, {Segment::make(1, 1, 2, {{0, 0}, {0.5, 0}}, 1.0)});
  const auto wps = route_to_waypoints(route_from_segments(net, {1}), 1.0, net);
  ASSERT_EQ(wps.size(), 2u);
  EXPECT_EQ(wps.back().x, 0.5);
}

TEST(Waypoints, LShapePreservesArcLengthAndTurnsQuarter) {
  const RoadNetwork net({{1, {0, 0}}, {2, {7.3, 0}}, {3, {7.3, 5.55}}},
                        {Segment::make(1, 1, 2, {{0, 0}, {7.3, 0}}, 2.0),
                         Segment::make(2, 2, 3, {{7.3, 0}, {7.3, 5.55}}, 3.0)});
  const Route r = route_from_segments(net, {1, 2});
  const auto wps = route_to_waypoints(r, 1.0, net);
  EXPECT_NEAR(path_length(wps), route_length(r, net), 1e-6);
  EXPECT_NEAR(wps.back().yaw - wps.front().yaw, std::numbers::pi / 2, 1e-12);
  for (std::size_t i = 1; i < wps.size(); ++i) {
    EXPECT_LE(distance(wps[i - 1].position(), wps[i].position()), 1.0 + 1e-12);
  }
}

TEST(Waypoints, FileRoundTrip) {
  const RoadNetwork net = square_network();
  const auto wps = route_to_waypoints(shortest_route(net, 0, 5, length_weights(net), Algorithm::astar), 1.0, net);
  std::stringstream buf;
  write_waypoint_file(buf, wps);
  EXPECT_EQ(buf.str().substr(0, 19), "x,y,z,yaw,velocity\n");
  EXPECT_EQ(read_waypoint_file(buf), wps);

  std::stringstream bad("x,y,z,yaw,velocity\n1,2,3,4\n");
  EXPECT_THROW(read_waypoint_file(bad), Error);
  std::stringstream negative("x,y,z,yaw,velocity\n1,2,3,4,-1\n");
  EXPECT_THROW(read_waypoint_file(negative), Error);
}

TEST(Waypoints, InferRouteRecoversSegments) {
  const RoadNetwork net = square_network();
  const Route r = route_from_segments(net, {1, 4, 5, 6, 3});
  EXPECT_EQ(infer_route(route_to_waypoints(r, 1.0, net), net), r);
}

TEST(IntersectionDistance, ArcLengthAndSentinel) {
  const RoadNetwork net = square_network();
  const Route r = shortest_route(net, 0, 5, length_weights(net), Algorithm::astar);
  EXPECT_DOUBLE_EQ(distance_to_next_intersection({-50, 0}, r, net), 50.0);
  EXPECT_DOUBLE_EQ(distance_to_next_intersection({-2.9, 0.2}, r, net), 2.9);
  EXPECT_DOUBLE_EQ(distance_to_next_intersection({150, 0}, r, net), 50.0);
  EXPECT_EQ(distance_to_next_intersection({230, 0}, r, net), kInfinity);
  const auto next = next_intersection({-10, 0}, r, net);
  ASSERT_TRUE(next);
  EXPECT_EQ(next->node, 1u);
  try {
    distance_to_next_intersection({100, 50}, r, net);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::off_route);
  }
}

}  // namespace
}  // namespace smdt::road
