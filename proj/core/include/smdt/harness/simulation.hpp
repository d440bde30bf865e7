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

#ifndef SMDT_HARNESS_SIMULATION_HPP_
#define SMDT_HARNESS_SIMULATION_HPP_

#include "smdt/harness/event_log.hpp"
#include "smdt/harness/metrics.hpp"
#include "smdt/harness/scenario.hpp"

namespace smdt::harness {

struct RunResult {
  EventLog log;
  MetricsReport metrics;
};

/// One deterministic virtual-time run. The log is a pure function of
/// (config, seed); metrics are computed from the log. Throws
/// Error(validation) listing offending fields for an invalid config.
RunResult run_scenario(const ScenarioConfig& config, std::uint64_t seed);

EventLog simulate(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace smdt::harness

#endif  // SMDT_HARNESS_SIMULATION_HPP_
