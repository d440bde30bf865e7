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

#include "smdt/world/control.hpp"

#include <algorithm>

namespace smdt::world {

PursuitResult pure_pursuit_control(const EgoState& ego, std::span<const road::Waypoint> path,
                                   const PursuitParams& params, std::size_t search_window) {
  PursuitResult out;
  if (path.size() < 2) {
    out.exhausted = true;
    return out;
  }

  const Vec2 pos = ego.position();
  const std::size_t pieces = std::min(search_window, path.size() - 1);
  double best = kInfinity;
  double foot_t = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const Vec2 a = path[i].position();
    const Vec2 ab = path[i + 1].position() - a;
    const double len2 = ab.dot(ab);
    const double t = len2 > 0.0 ? std::clamp((pos - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double d = distance(pos, a + ab * t);
    if (d < best - 1e-12) {
      best = d;
      out.nearest = i;
      foot_t = t;
    }
  }

  const std::size_t last = path.size() - 1;
  if (out.nearest + 1 == last) {
    const Vec2 tail = path[last].position() - path[last - 1].position();
    if ((pos - path[last].position()).dot(tail) >= 0.0) {
      out.exhausted = true;
      return out;
    }
  }

  const double lookahead = std::max(params.lookahead_gain * ego.speed, params.min_lookahead);
  const road::Waypoint& from = path[out.nearest];
  const road::Waypoint& to = path[out.nearest + 1];
  double arc = distance(from.position(), to.position()) * (1.0 - foot_t);
  std::size_t target = out.nearest + 1;
  while (arc < lookahead && target < last) {
    arc += distance(path[target].position(), path[target + 1].position());
    ++target;
  }
  out.target = path[target].position();

  const Vec2 d = out.target - pos;
  const double y_rel = -std::sin(ego.yaw) * d.x + std::cos(ego.yaw) * d.y;
  const double l2 = d.dot(d);
  const double curvature = l2 > 1e-12 ? 2.0 * y_rel / l2 : 0.0;
  out.command.steering_angle =
      std::clamp(std::atan(ego.wheelbase * curvature), -params.max_steering, params.max_steering);
  out.command.target_speed = std::max(0.0, to.velocity);
  return out;
}

std::vector<double> plan_velocity(std::span<const road::Waypoint> waypoints,
                                  std::span<const double> obstacles_ahead,
                                  std::span<const double> stop_points, double a_comfy,
                                  double standoff) {
  if (!(a_comfy > 0.0)) throw Error(Errc::configuration, "a_comfy must be positive");
  std::vector<double> stops(stop_points.begin(), stop_points.end());
  for (double d : obstacles_ahead) stops.push_back(std::max(0.0, d - standoff));

  std::vector<double> v;
  v.reserve(waypoints.size());
  double s = 0.0;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    if (i > 0) s += distance(waypoints[i - 1].position(), waypoints[i].position());
    double cap = waypoints[i].velocity;
    for (double stop : stops) {
      cap = std::min(cap, s < stop ? std::sqrt(2.0 * a_comfy * (stop - s)) : 0.0);
    }
    v.push_back(cap);
  }
  return v;
}

EgoState integrate_bicycle(const EgoState& state, const ControlCommand& cmd, double dt,
                           const AccelLimits& limits) {
  for (double v : {state.x, state.y, state.yaw, state.speed, state.wheelbase, cmd.steering_angle,
                   cmd.target_speed, dt}) {
    if (!std::isfinite(v)) throw Error(Errc::fault, "non-finite bicycle model input");
  }
  if (!(dt > 0.0)) throw Error(Errc::configuration, "integration step must be positive");

  EgoState next = state;
  const double dv = std::clamp(cmd.target_speed - state.speed, -limits.decel * dt, limits.accel * dt);
  next.speed = std::max(0.0, state.speed + dv);
  const double v = 0.5 * (state.speed + next.speed);
  const double steer = std::clamp(cmd.steering_angle, -limits.max_steering, limits.max_steering);
  const double dyaw = v * std::tan(steer) / state.wheelbase * dt;
  const double mid = state.yaw + 0.5 * dyaw;
  next.x += v * std::cos(mid) * dt;
  next.y += v * std::sin(mid) * dt;
  next.yaw = dyaw == 0.0 ? state.yaw : wrap_angle(state.yaw + dyaw);
  return next;
}

Pose2 localize(const EgoState& ego, double noise_sigma, Rng& rng) {
  if (noise_sigma < 0.0) throw Error(Errc::configuration, "noise sigma must be non-negative");
  if (noise_sigma == 0.0) return ego.pose();
  Pose2 p;
  p.x = rng.normal(ego.x, noise_sigma);
  p.y = rng.normal(ego.y, noise_sigma);
  p.yaw = wrap_angle(rng.normal(ego.yaw, noise_sigma / 10.0));
  return p;
}

}  // namespace smdt::world
