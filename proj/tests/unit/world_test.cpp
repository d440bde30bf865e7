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

#include <gtest/gtest.h>

#include "smdt/world/actors.hpp"
#include "smdt/world/control.hpp"
#include "smdt/world/event_queue.hpp"
#include "support.hpp"

namespace smdt::world {
namespace {

using road::Waypoint;
using smdt::testing::circle_path;
using smdt::testing::straight_path;

// ---------------------------------------------------------------------------
// Pure pursuit geometry
// ---------------------------------------------------------------------------

TEST(PurePursuit, CollinearTargetGivesZeroSteering) {
  const EgoState ego{0, 0, 0, 0.0, 2.7};
  const std::vector<Waypoint> path{{0, 0, 0, 0, 3}, {5, 0, 0, 0, 3}, {6, 0, 0, 0, 3}};
  const auto r = pure_pursuit_control(ego, path, {0.5, 5.0, 0.6});
  EXPECT_EQ(r.target, (Vec2{5, 0}));
  EXPECT_DOUBLE_EQ(r.command.steering_angle, 0.0);
  EXPECT_FALSE(r.exhausted);
}

TEST(PurePursuit, OffsetTargetMatchesCircleThroughTwoPoints) {
  // Circle through the ego (tangent to its heading) and the target: the
  // centre sits at (0, R) with R = l^2 / (2 y).
  const Vec2 target{std::sqrt(24.0), 1.0};
  const double radius = target.dot(target) / (2 * target.y);
  const EgoState ego{0, 0, 0, 0.0, 2.7};
  const std::vector<Waypoint> path{{0, 0, 0, 0, 3}, {target.x, target.y, 0, 0, 3}, {6, 1, 0, 0, 3}};
  const auto r = pure_pursuit_control(ego, path, {0.5, 4.0, 0.6});
  EXPECT_NEAR(r.command.steering_angle, std::atan(2.7 / radius), 1e-12);
  EXPECT_NEAR(r.command.steering_angle, 0.2127, 5e-5);
  EXPECT_DOUBLE_EQ(r.command.target_speed, 3.0);
}

TEST(PurePursuit, SteeringIsClamped) {
  const EgoState ego{0, 0, 0, 0.0, 2.7};
  const std::vector<Waypoint> path{{0, 0, 0, 0, 1}, {0.2, 2, 0, 0, 1}, {0.2, 3, 0, 0, 1}};
  const auto r = pure_pursuit_control(ego, path, {0.5, 2.0, 0.4});
  EXPECT_DOUBLE_EQ(r.command.steering_angle, 0.4);
}

TEST(PurePursuit, EndOfPathIsExhausted) {
  const EgoState ego{10.5, 0, 0, 1.0, 2.7};
  const auto r = pure_pursuit_control(ego, straight_path(10, 1, 1), {});
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(r.command.target_speed, 0.0);
}

// ---------------------------------------------------------------------------
// Closed loop
// ---------------------------------------------------------------------------

TEST(ClosedLoop, CircleSteadyStateSteering) {
  const double r = 20.0;
  const auto path = circle_path(r, 2, 0.5, 2.0);
  EgoState ego{0, 0, 0, 2.0, 2.7};
  std::size_t index = 0;
  double steering = 0.0;
  const double dt = 0.01;
  // One full lap to settle, then sample.
  const int settle = static_cast<int>(2 * std::numbers::pi * r / 2.0 / dt);
  double sum = 0.0;
  int samples = 0;
  for (int k = 0; k < settle + 500; ++k) {
    const auto out = pure_pursuit_control(ego, std::span(path).subspan(index), {0.5, 2.0, 0.6});
    ASSERT_FALSE(out.exhausted);
    index += out.nearest;
    steering = out.command.steering_angle;
    if (k >= settle) {
      sum += steering;
      ++samples;
    }
    ego = integrate_bicycle(ego, {steering, 2.0}, dt);
  }
  const double expected = std::atan(2.7 / r);
  EXPECT_NEAR(sum / samples, expected, 0.05 * expected);
  EXPECT_NEAR(expected, 0.1342, 1e-4);
}

TEST(ClosedLoop, StraightLineConvergesFromHalfMetreOffset) {
  const auto path = straight_path(60, 1.0, 4.167);
  EgoState ego{0, 0.5, 0, 4.167, 2.7};
  std::size_t index = 0;
  while (ego.x < 10.0) {
    const auto out = pure_pursuit_control(ego, std::span(path).subspan(index), {});
    index += out.nearest;
    ego = integrate_bicycle(ego, out.command, 0.01);
  }
  EXPECT_LT(std::abs(ego.y), 0.05);
}

// ---------------------------------------------------------------------------
// Velocity planning
// ---------------------------------------------------------------------------

TEST(PlanVelocity, IdentityWithoutConstraints) {
  auto path = straight_path(10, 1, 4.167);
  path[3].velocity = 2.0;
  const auto v = plan_velocity(path, {}, {}, 3.048);
  ASSERT_EQ(v.size(), path.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], path[i].velocity);
}

TEST(PlanVelocity, StopProfileRespectsComfortEnvelope) {
  const double a = 3.617;
  const double stop = 4.8;
  const auto path = straight_path(6, 0.05, 4.167);
  const std::vector<double> stops{stop};
  const auto v = plan_velocity(path, {}, stops, a);
  EXPECT_LE(v.front(), std::sqrt(2 * a * stop));
  EXPECT_NEAR(std::sqrt(2 * a * stop), 5.893, 2e-3);
  // Braking starts where the envelope meets the cruise speed.
  double brake_start = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = stop - path[i].x;
    EXPECT_LE(v[i], path[i].velocity);
    if (d > 0) EXPECT_LE(v[i], std::sqrt(2 * a * d) + 1e-12);
    else EXPECT_EQ(v[i], 0.0);
    if (brake_start < 0 && v[i] < 4.167) brake_start = path[i].x;
    if (i > 0) EXPECT_LE(v[i], v[i - 1]);
  }
  EXPECT_NEAR(stop - brake_start, 4.167 * 4.167 / (2 * a), 0.05);
  // Constant deceleration through the braking zone.
  double mean = 0.0;
  int n = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (path[i - 1].x < brake_start || path[i].x > stop) continue;
    mean += (v[i - 1] * v[i - 1] - v[i] * v[i]) / (2 * (path[i].x - path[i - 1].x));
    ++n;
  }
  EXPECT_NEAR(mean / n, 3.62, 0.05);
}

TEST(PlanVelocity, ObstacleInsideStandoffStopsImmediately) {
  const auto path = straight_path(5, 0.5, 4.167);
  const std::vector<double> obstacles{1.0};
  const auto v = plan_velocity(path, obstacles, {}, 3.048);
  EXPECT_EQ(v.front(), 0.0);
}

TEST(PlanVelocity, RejectsNonPositiveDeceleration) {
  const auto path = straight_path(5, 0.5, 4.167);
  EXPECT_THROW(plan_velocity(path, {}, {}, 0.0), Error);
}

// ---------------------------------------------------------------------------
// Kinematics
// ---------------------------------------------------------------------------

TEST(Bicycle, StraightMotion) {
  const EgoState s{0, 0, 0, 4.167, 2.7};
  const EgoState n = integrate_bicycle(s, {0.0, 4.167}, 1.0);
  EXPECT_NEAR(n.x, 4.167, 1e-12);
  EXPECT_EQ(n.y, 0.0);
  EXPECT_EQ(n.yaw, 0.0);
}

TEST(Bicycle, RestIsUnchanged) {
  const EgoState s{3, 4, 0.5, 0.0, 2.7};
  const EgoState n = integrate_bicycle(s, {0.3, 0.0}, 0.1);
  EXPECT_EQ(n.x, s.x);
  EXPECT_EQ(n.y, s.y);
  EXPECT_EQ(n.yaw, s.yaw);
  EXPECT_EQ(n.speed, 0.0);
}

TEST(Bicycle, CircleReturnsToStart) {
  const double r = 20.0;
  const double v = 2.0;
  EgoState s{0, 0, 0, v, 2.7};
  const int steps = static_cast<int>(std::llround(2 * std::numbers::pi * r / v / 1e-3));
  for (int i = 0; i < steps; ++i) s = integrate_bicycle(s, {std::atan(2.7 / r), v}, 1e-3);
  EXPECT_LT(std::hypot(s.x, s.y), 0.1);
}

TEST(Bicycle, SpeedIsRateLimited) {
  EgoState s{0, 0, 0, 0.0, 2.7};
  s = integrate_bicycle(s, {0.0, 10.0}, 0.1, {3.0, 4.5, 0.6});
  EXPECT_NEAR(s.speed, 0.3, 1e-12);
  s.speed = 4.0;
  s = integrate_bicycle(s, {0.0, 0.0}, 0.1, {3.0, 4.5, 0.6});
  EXPECT_NEAR(s.speed, 3.55, 1e-12);
}

TEST(Bicycle, Errors) {
  const EgoState s{0, 0, 0, 1.0, 2.7};
  EXPECT_THROW(integrate_bicycle(s, {std::nan(""), 1.0}, 0.1), Error);
  EXPECT_THROW(integrate_bicycle(s, {0.0, 1.0}, 0.0), Error);
}

// ---------------------------------------------------------------------------
// Localization
// ---------------------------------------------------------------------------

TEST(Localize, NoiselessIsExact) {
  Rng rng(1);
  const EgoState s{1.5, -2.5, 0.7, 3.0, 2.7};
  const Pose2 p = localize(s, 0.0, rng);
  EXPECT_EQ(p.x, s.x);
  EXPECT_EQ(p.y, s.y);
  EXPECT_EQ(p.yaw, s.yaw);
}

TEST(Localize, SampleSpreadMatchesSigma) {
  Rng rng(42);
  const EgoState s{10, 20, 0.0, 0.0, 2.7};
  const int n = 100000;
  double sx = 0, sxx = 0, sy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const Pose2 p = localize(s, 0.03, rng);
    sx += p.x - s.x;
    sxx += (p.x - s.x) * (p.x - s.x);
    sy += p.y - s.y;
    syy += (p.y - s.y) * (p.y - s.y);
  }
  const double std_x = std::sqrt(sxx / n - (sx / n) * (sx / n));
  const double std_y = std::sqrt(syy / n - (sy / n) * (sy / n));
  EXPECT_GE(std_x, 0.029);
  EXPECT_LE(std_x, 0.031);
  EXPECT_GE(std_y, 0.029);
  EXPECT_LE(std_y, 0.031);
}

TEST(Localize, SameSeedSameSequence) {
  Rng a(9), b(9);
  const EgoState s{0, 0, 0, 0, 2.7};
  for (int i = 0; i < 1000; ++i) {
    const Pose2 p = localize(s, 0.03, a);
    const Pose2 q = localize(s, 0.03, b);
    ASSERT_EQ(p.x, q.x);
    ASSERT_EQ(p.y, q.y);
    ASSERT_EQ(p.yaw, q.yaw);
  }
}

// ---------------------------------------------------------------------------
// Actors and scheduling
// ---------------------------------------------------------------------------

TEST(Actors, LinearInterpolationAndLiveness) {
  Actor a;
  a.id = 7;
  a.trajectory = {{SimTime::from_seconds(1), {0, 0}}, {SimTime::from_seconds(3), {4, 2}}};
  EXPECT_FALSE(actor_state_at(a, SimTime::from_seconds(0.5)));
  const auto mid = actor_state_at(a, SimTime::from_seconds(2));
  ASSERT_TRUE(mid);
  EXPECT_NEAR(mid->position.x, 2.0, 1e-12);
  EXPECT_NEAR(mid->position.y, 1.0, 1e-12);
  EXPECT_NEAR(mid->velocity.x, 2.0, 1e-12);
  EXPECT_FALSE(actor_state_at(a, SimTime::from_seconds(3.5)));

  Actor bad = a;
  bad.trajectory[1].time = bad.trajectory[0].time;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Actors, StaticActorWindow) {
  Actor a;
  a.trajectory = {{SimTime{0}, {5, 5}}};
  a.appear = SimTime::from_seconds(2);
  a.disappear = SimTime::from_seconds(4);
  EXPECT_FALSE(actor_state_at(a, SimTime::from_seconds(1)));
  EXPECT_TRUE(actor_state_at(a, SimTime::from_seconds(2)));
  EXPECT_FALSE(actor_state_at(a, SimTime::from_seconds(4)));
}

TEST(EventQueue, OrdersByTimeKindSourceThenInsertion) {
  EventQueue q;
  std::vector<int> order;
  q.schedule(SimTime{20}, EventKind::world_tick, 0, [&] { order.push_back(5); });
  q.schedule(SimTime{10}, EventKind::vehicle, 0, [&] { order.push_back(4); });
  q.schedule(SimTime{10}, EventKind::rsu_frame, 2, [&] { order.push_back(3); });
  q.schedule(SimTime{10}, EventKind::rsu_frame, 1, [&] { order.push_back(1); });
  q.schedule(SimTime{10}, EventKind::rsu_frame, 1, [&] { order.push_back(2); });
  q.schedule(SimTime{10}, EventKind::world_tick, 9, [&] { order.push_back(0); });
  q.run_until(SimTime{15});
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(q.now(), SimTime{15});
  EXPECT_THROW(q.schedule(SimTime{14}, EventKind::vehicle, 0, [] {}), Error);
  EXPECT_TRUE(q.step());
  EXPECT_EQ(order.back(), 5);
  EXPECT_FALSE(q.step());
}

}  // namespace
}  // namespace smdt::world
