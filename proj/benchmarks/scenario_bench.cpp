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

#include <filesystem>

#include <benchmark/benchmark.h>

#include "smdt/harness/simulation.hpp"

namespace {

using namespace smdt;

void BM_ScenarioB(benchmark::State& state) {
  harness::ScenarioConfig cfg =
      harness::load_scenario(std::filesystem::path(SMDT_SCENARIO_DIR) / "scenario_b.yaml");
  cfg.ego.laps = 1;
  cfg.run.duration_s = 90.0;
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(harness::simulate(cfg, seed++));
}
BENCHMARK(BM_ScenarioB)->Unit(benchmark::kMillisecond);

}  // namespace
