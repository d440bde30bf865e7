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

#ifndef SMDT_COMMON_HPP_
#define SMDT_COMMON_HPP_

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace smdt {

using NodeId = std::uint32_t;
using SegmentId = std::uint32_t;
using ActorId = std::uint32_t;
using RsuId = std::uint16_t;
using TrackId = std::uint32_t;

/// Duration on the virtual clock, in microseconds.
using Micros = std::int64_t;

/// Point in virtual time, microseconds since scenario start.
struct SimTime {
  std::int64_t us = 0;

  static constexpr SimTime from_us(std::int64_t v) { return SimTime{v}; }
  static SimTime from_seconds(double s) {
    return SimTime{static_cast<std::int64_t>(std::llround(s * 1e6))};
  }
  constexpr double seconds() const { return static_cast<double>(us) * 1e-6; }

  constexpr SimTime operator+(Micros d) const { return SimTime{us + d}; }
  constexpr SimTime operator-(Micros d) const { return SimTime{us - d}; }
  constexpr Micros operator-(SimTime o) const { return us - o.us; }
  constexpr auto operator<=>(const SimTime&) const = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  constexpr bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Planar pose in the global frame.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Vec2 position() const { return {x, y}; }
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Errc {
  configuration,
  validation,
  no_route,
  off_route,
  route_exhausted,
  not_found,
  fault,
  protocol,
  infeasible_stop,
  io,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// The single pseudo-random stream of a scenario run. Normal draws use
/// Box-Muller on top of mt19937_64 so sequences are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double mean, double sigma);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace smdt

#endif  // SMDT_COMMON_HPP_
