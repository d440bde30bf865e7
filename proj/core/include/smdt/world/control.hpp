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

#ifndef SMDT_WORLD_CONTROL_HPP_
#define SMDT_WORLD_CONTROL_HPP_

#include <span>
#include <vector>

#include "smdt/road/waypoints.hpp"
#include "smdt/world/actors.hpp"

namespace smdt::world {

struct ControlCommand {
  double steering_angle = 0.0;
  double target_speed = 0.0;
};

struct PursuitParams {
  double lookahead_gain = 0.5;  // s
  double min_lookahead = 2.0;   // m
  double max_steering = 0.6;    // rad
};

struct PursuitResult {
  ControlCommand command;
  /// Index of the path piece (waypoint i -> i+1) the ego projects onto.
  std::size_t nearest = 0;
  Vec2 target;
  /// No waypoint remains ahead; the caller should bring the vehicle to rest.
  bool exhausted = false;
};

/// Pure-pursuit steering toward the first waypoint whose arc distance from
/// the ego's projection is at least max(gain * speed, min_lookahead).
/// Curvature is 2 * y / l^2 with y the target's lateral offset in the ego
/// frame and l its distance. Only the first `search_window` pieces of `path`
/// are searched for the projection, so callers pass the path starting near
/// the current tracking index.
PursuitResult pure_pursuit_control(const EgoState& ego, std::span<const road::Waypoint> path,
                                   const PursuitParams& params, std::size_t search_window = 64);

/// Caps waypoint velocities so the vehicle can stop, at constant
/// deceleration `a_comfy`, at every stop point and `standoff` metres before
/// every obstacle. Distances are arc lengths from the first waypoint.
/// Waypoints at or beyond a stop get zero.
std::vector<double> plan_velocity(std::span<const road::Waypoint> waypoints,
                                  std::span<const double> obstacles_ahead,
                                  std::span<const double> stop_points, double a_comfy,
                                  double standoff = 1.0);

struct AccelLimits {
  double accel = 3.048;  // m/s^2
  double decel = 4.5;    // m/s^2
  double max_steering = 0.6;
};

/// Kinematic bicycle step. Speed approaches target_speed within the accel
/// limits; heading integrates v * tan(steering) / wheelbase. Throws
/// Error(fault) on non-finite inputs and Error(configuration) on dt <= 0.
EgoState integrate_bicycle(const EgoState& state, const ControlCommand& cmd, double dt,
                           const AccelLimits& limits = {});

/// Ground truth plus seeded Gaussian noise: sigma on x/y, sigma/10 on yaw.
Pose2 localize(const EgoState& ego, double noise_sigma, Rng& rng);

}  // namespace smdt::world

#endif  // SMDT_WORLD_CONTROL_HPP_
