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

#include "smdt/common.hpp"

#include <numbers>

namespace smdt {

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - std::numbers::pi;
}

const char* to_string(Errc code) {
  switch (code) {
    case Errc::configuration: return "configuration";
    case Errc::validation: return "validation";
    case Errc::no_route: return "no_route";
    case Errc::off_route: return "off_route";
    case Errc::route_exhausted: return "route_exhausted";
    case Errc::not_found: return "not_found";
    case Errc::fault: return "fault";
    case Errc::protocol: return "protocol";
    case Errc::infeasible_stop: return "infeasible_stop";
    case Errc::io: return "io";
  }
  return "unknown";
}

double Rng::normal(double mean, double sigma) {
  if (sigma == 0.0) return mean;
  // 1 - uniform() lies in (0, 1], keeping log() finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace smdt
