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

#ifndef SMDT_HARNESS_METRICS_HPP_
#define SMDT_HARNESS_METRICS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "smdt/harness/event_log.hpp"
#include "smdt/net/link.hpp"
#include "smdt/vehicle/requisition.hpp"

namespace smdt::harness {

struct LinkReport {
  std::string link;
  /// "all" or a message type name.
  std::string stream;
  net::LinkStats stats;
  double duration_s = 0.0;

  double bitrate_bps() const;
};

struct LatencyRecord {
  Micros time_us = 0;
  std::uint32_t seq = 0;
  NodeId intersection = 0;
  vehicle::LatencyBreakdown latency;
  /// Distance left to the intersection when the route was applied.
  std::optional<double> residual_m;
  std::optional<double> stop_decel;
  std::string decel_class;
};

struct LatencySummary {
  std::vector<LatencyRecord> records;
  std::optional<Micros> t_max;
  std::optional<Micros> p50;
  std::optional<Micros> p95;
  std::optional<double> mean_total_us;
  std::vector<std::string> warnings;
};

struct DecisionRecord {
  Micros time_us = 0;
  std::uint32_t seq = 0;
  NodeId start = 0;
  NodeId destination = 0;
  std::string status;
  std::vector<NodeId> nodes;
};

struct LapRecord {
  std::uint32_t lap = 0;
  Micros time_us = 0;
  std::vector<NodeId> nodes;
};

enum class VerdictState { pass, fail, not_applicable };
std::string_view to_string(VerdictState v);

struct Verdict {
  std::string name;
  VerdictState state = VerdictState::not_applicable;
  std::string detail;
};

struct VerdictConfig {
  double min_pdr = 0.95;
  Micros latency_budget_us = 100'000;
  double max_route_change_rate = 0.92;  // per minute
};

struct MetricsReport {
  std::string scenario;
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  double threshold_distance = 0.0;
  std::string digest;

  std::vector<LinkReport> links;
  net::LinkStats i2c_total;
  std::optional<double> i2c_pdr;

  LatencySummary latency;
  std::optional<double> latency_margin_pct;
  std::optional<double> mean_residual_m;
  std::optional<double> mean_stop_decel;
  std::size_t timeouts = 0;
  std::size_t fallbacks = 0;

  std::vector<DecisionRecord> decisions;
  std::size_t route_changes = 0;
  double route_change_rate = 0.0;
  std::vector<LapRecord> laps;

  std::vector<std::string> warnings;
  std::vector<Verdict> verdicts;

  /// No verdict failed.
  bool all_pass() const;
};

/// Per-request latency components and their maximum. An empty summary
/// carries a warning instead of failing.
LatencySummary latency_breakdown(const EventLog& log);

/// Route decisions logged by the cloud, in request order.
std::vector<DecisionRecord> route_decisions(const EventLog& log);

/// Consecutive decisions for the same (start, destination) whose node
/// sequences differ.
std::size_t count_route_changes(const std::vector<DecisionRecord>& decisions);

/// Route changes per minute over a window of `window_s` seconds. Throws
/// Error(configuration) unless window_s > 0.
double route_change_rate(const EventLog& log, double window_s);

/// Headroom of `t_max` under `budget`, in percent.
double latency_margin_pct(Micros t_max, Micros budget);

/// Everything in the report is derived from the log alone.
MetricsReport compute_metrics(const EventLog& log, const VerdictConfig& verdicts = {});

std::string format_text(const MetricsReport& report);

/// Writes summary.txt plus latency.csv, links.csv, decisions.csv and
/// laps.csv into `dir`. Throws Error(io) when a file cannot be written.
void write_report(const MetricsReport& report, const std::filesystem::path& dir);

}  // namespace smdt::harness

#endif  // SMDT_HARNESS_METRICS_HPP_
