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

// smdt: run, report, validate and sweep digital-twin scenarios.
//
// Exit status: 0 when every configured verdict passes, 1 when a verdict
// fails, 2 on usage, configuration or I/O errors.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "smdt/harness/simulation.hpp"

namespace {

using namespace smdt;

constexpr int kPass = 0;
constexpr int kVerdictFailed = 1;
constexpr int kError = 2;

int verdict_exit(const harness::MetricsReport& m) { return m.all_pass() ? kPass : kVerdictFailed; }

void write_log(const harness::EventLog& log, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "events.log", std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + (dir / "events.log").string());
  log.write(out);
}

int cmd_run(const std::string& scenario, std::optional<std::uint64_t> seed, const std::string& out) {
  const harness::ScenarioConfig cfg = harness::load_scenario(scenario);
  const harness::RunResult r = harness::run_scenario(cfg, seed.value_or(cfg.run.seed));
  write_log(r.log, out);
  harness::write_report(r.metrics, out);
  std::cout << harness::format_text(r.metrics);
  return verdict_exit(r.metrics);
}

int cmd_report(const std::string& in, const std::string& out) {
  const std::filesystem::path dir(in);
  std::ifstream file(dir / "events.log", std::ios::binary);
  if (!file) throw Error(Errc::io, "cannot open " + (dir / "events.log").string());
  const harness::EventLog log = harness::EventLog::read(file);
  const harness::MetricsReport m = harness::compute_metrics(log);
  harness::write_report(m, out.empty() ? dir : std::filesystem::path(out));
  std::cout << harness::format_text(m);
  return verdict_exit(m);
}

int cmd_validate(const std::string& scenario) {
  try {
    const harness::ScenarioConfig cfg = harness::load_scenario(scenario);
    std::cout << scenario << ": ok (" << cfg.nodes.size() << " nodes, " << cfg.segments.size()
              << " segments, " << cfg.rsus.size() << " RSUs, " << cfg.actors.size() << " actors)\n";
    return kPass;
  } catch (const Error& e) {
    std::cerr << scenario << ": " << e.what() << "\n";
    return kError;
  }
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  std::uint64_t a = 0, b = 0;
  auto parse = [&](std::string_view s, std::uint64_t& v) {
    return !s.empty() && std::from_chars(s.data(), s.data() + s.size(), v).ptr == s.data() + s.size();
  };
  if (dots == std::string::npos || !parse(std::string_view(text).substr(0, dots), a) ||
      !parse(std::string_view(text).substr(dots + 2), b) || b < a) {
    throw Error(Errc::configuration, "--seeds expects a..b with a <= b, got '" + text + "'");
  }
  return {a, b};
}

int cmd_sweep(const std::string& scenario, const std::string& seeds, unsigned jobs,
              const std::string& out) {
  const harness::ScenarioConfig cfg = harness::load_scenario(scenario);
  const auto [first, last] = parse_seed_range(seeds);
  const std::size_t n = static_cast<std::size_t>(last - first + 1);

  std::vector<harness::MetricsReport> reports(n);
  std::vector<std::string> failures(n);
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const std::uint64_t seed = first + i;
      try {
        harness::RunResult r = harness::run_scenario(cfg, seed);
        if (!out.empty()) {
          const auto dir = std::filesystem::path(out) / ("seed_" + std::to_string(seed));
          std::lock_guard lock(io);
          write_log(r.log, dir);
          harness::write_report(r.metrics, dir);
        }
        reports[i] = std::move(r.metrics);
      } catch (const Error& e) {
        failures[i] = e.what();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, n); ++j) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  int status = kPass;
  std::printf("%-8s %-16s %-10s %-10s %-10s %s\n", "seed", "digest", "pdr_%", "t_max_ms", "changes/m",
              "verdicts");
  for (std::size_t i = 0; i < n; ++i) {
    if (!failures[i].empty()) {
      std::printf("%-8llu error: %s\n", static_cast<unsigned long long>(first + i), failures[i].c_str());
      status = kError;
      continue;
    }
    const harness::MetricsReport& m = reports[i];
    std::string verdicts;
    for (const harness::Verdict& v : m.verdicts) {
      verdicts += v.name + "=" + std::string(harness::to_string(v.state)) + " ";
    }
    char pdr[32] = "-", tmax[32] = "-";
    if (m.i2c_pdr) std::snprintf(pdr, sizeof pdr, "%.3f", *m.i2c_pdr * 100.0);
    if (m.latency.t_max) std::snprintf(tmax, sizeof tmax, "%.3f", static_cast<double>(*m.latency.t_max) / 1000.0);
    std::printf("%-8llu %-16s %-10s %-10s %-10.3f %s\n", static_cast<unsigned long long>(m.seed),
                m.digest.c_str(), pdr, tmax, m.route_change_rate, verdicts.c_str());
    if (status == kPass && !m.all_pass()) status = kVerdictFailed;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smart-mobility digital twin simulator"};
  app.require_subcommand(1);

  std::string scenario, out, in, seeds;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;

  CLI::App* run = app.add_subcommand("run", "Run one scenario and write the log and report");
  run->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Seed (defaults to run.seed in the scenario)");
  run->add_option("--out", out, "Output directory")->required();

  CLI::App* report = app.add_subcommand("report", "Recompute the report from a run directory");
  report->add_option("--in", in, "Directory containing events.log")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", out, "Write report files here instead of --in");

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);

  CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario over a range of seeds");
  sweep->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--seeds", seeds, "Inclusive seed range a..b")->required();
  sweep->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");
  sweep->add_option("--out", out, "Write per-seed run directories here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*run) return cmd_run(scenario, seed, out);
    if (*report) return cmd_report(in, out);
    if (*validate) return cmd_validate(scenario);
    if (*sweep) return cmd_sweep(scenario, seeds, jobs, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
