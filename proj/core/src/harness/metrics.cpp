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

#include "smdt/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace smdt::harness {

namespace {

std::vector<NodeId> parse_nodes(std::string_view text) {
  std::vector<NodeId> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    out.push_back(static_cast<NodeId>(std::stoul(std::string(text.substr(start, comma - start)))));
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<NodeId>& nodes, char sep = ',') {
  std::string out;
  for (NodeId n : nodes) {
    if (!out.empty()) out += sep;
    out += std::to_string(n);
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string ms(Micros us) { return fixed(static_cast<double>(us) / 1000.0, 3); }

/// Nearest-rank percentile of a sorted list.
Micros percentile(const std::vector<Micros>& sorted, double p) {
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
}

}  // namespace

double LinkReport::bitrate_bps() const {
  return duration_s > 0.0 ? static_cast<double>(stats.bytes_delivered) * 8.0 / duration_s : 0.0;
}

std::string_view to_string(VerdictState v) {
  switch (v) {
    case VerdictState::pass: return "PASS";
    case VerdictState::fail: return "FAIL";
    case VerdictState::not_applicable: return "NA";
  }
  return "?";
}

bool MetricsReport::all_pass() const {
  return std::none_of(verdicts.begin(), verdicts.end(),
                      [](const Verdict& v) { return v.state == VerdictState::fail; });
}

LatencySummary latency_breakdown(const EventLog& log) {
  LatencySummary out;
  for (const Record& r : log.records()) {
    if (r.component != "vehicle" || r.event != "requisition") continue;
    LatencyRecord rec;
    rec.time_us = r.time_us;
    rec.seq = static_cast<std::uint32_t>(r.integer("seq"));
    rec.intersection = static_cast<NodeId>(r.integer("node"));
    rec.latency.t_local = r.integer("t_local");
    rec.latency.t_comm = r.integer("t_comm");
    rec.latency.t_comm_request = r.integer("t_comm_request");
    rec.latency.t_exe = r.integer("t_exe");
    if (r.get("residual")) rec.residual_m = r.number("residual");
    if (r.get("decel")) rec.stop_decel = r.number("decel");
    if (auto c = r.get("decel_class")) rec.decel_class = std::string(*c);
    out.records.push_back(std::move(rec));
  }
  if (out.records.empty()) {
    out.warnings.emplace_back("no completed route requisition in the log");
    return out;
  }
  std::vector<Micros> totals;
  for (const LatencyRecord& r : out.records) totals.push_back(r.latency.total());
  std::sort(totals.begin(), totals.end());
  out.t_max = totals.back();
  out.p50 = percentile(totals, 50.0);
  out.p95 = percentile(totals, 95.0);
  out.mean_total_us = static_cast<double>(std::accumulate(totals.begin(), totals.end(), Micros{0})) /
                      static_cast<double>(totals.size());
  return out;
}

std::vector<DecisionRecord> route_decisions(const EventLog& log) {
  std::vector<DecisionRecord> out;
  for (const Record& r : log.records()) {
    if (r.component != "cloud" || r.event != "route_decision") continue;
    DecisionRecord d;
    d.time_us = r.time_us;
    d.seq = static_cast<std::uint32_t>(r.integer("seq"));
    d.start = static_cast<NodeId>(r.integer("start"));
    d.destination = static_cast<NodeId>(r.integer("dest"));
    d.status = std::string(r.get("status").value_or(""));
    d.nodes = parse_nodes(r.get("nodes").value_or(""));
    out.push_back(std::move(d));
  }
  return out;
}

std::size_t count_route_changes(const std::vector<DecisionRecord>& decisions) {
  std::map<std::pair<NodeId, NodeId>, const DecisionRecord*> last;
  std::size_t changes = 0;
  for (const DecisionRecord& d : decisions) {
    const DecisionRecord*& prev = last[{d.start, d.destination}];
    if (prev && prev->nodes != d.nodes) ++changes;
    prev = &d;
  }
  return changes;
}

double route_change_rate(const EventLog& log, double window_s) {
  if (!(window_s > 0.0)) throw Error(Errc::configuration, "route change window must be positive");
  return static_cast<double>(count_route_changes(route_decisions(log))) / (window_s / 60.0);
}

double latency_margin_pct(Micros t_max, Micros budget) {
  return 100.0 * static_cast<double>(budget - t_max) / static_cast<double>(budget);
}

MetricsReport compute_metrics(const EventLog& log, const VerdictConfig& vc) {
  MetricsReport m;
  m.digest = log.digest_hex();
  for (const Record& r : log.records()) {
    if (r.component == "run" && r.event == "start") {
      m.scenario = std::string(r.get("scenario").value_or(""));
      m.seed = static_cast<std::uint64_t>(r.integer("seed"));
      m.duration_s = r.number("duration_s");
      m.threshold_distance = r.number("d_thre");
    } else if (r.component == "net" && r.event == "link_stats") {
      LinkReport lr;
      lr.link = std::string(r.get("link").value_or(""));
      lr.stream = std::string(r.get("stream").value_or(""));
      lr.stats.offered = static_cast<std::uint64_t>(r.integer("offered"));
      lr.stats.delivered = static_cast<std::uint64_t>(r.integer("delivered"));
      lr.stats.dropped = static_cast<std::uint64_t>(r.integer("dropped"));
      lr.stats.dropped_out_of_range = static_cast<std::uint64_t>(r.integer("out_of_range"));
      lr.stats.dropped_unavailable = static_cast<std::uint64_t>(r.integer("unavailable"));
      lr.stats.bytes_offered = static_cast<std::uint64_t>(r.integer("bytes_offered"));
      lr.stats.bytes_delivered = static_cast<std::uint64_t>(r.integer("bytes_delivered"));
      lr.duration_s = m.duration_s;
      if (lr.stream == "all" && lr.link.starts_with("i2c/")) m.i2c_total += lr.stats;
      m.links.push_back(std::move(lr));
    } else if (r.component == "vehicle" && r.event == "timeout") {
      ++m.timeouts;
    } else if (r.component == "vehicle" && r.event == "fallback") {
      ++m.fallbacks;
    } else if (r.component == "ego" && r.event == "lap_complete") {
      m.laps.push_back({static_cast<std::uint32_t>(r.integer("lap")), r.time_us,
                        parse_nodes(r.get("nodes").value_or(""))});
    }
  }
  m.i2c_pdr = m.i2c_total.pdr();

  m.latency = latency_breakdown(log);
  m.warnings = m.latency.warnings;
  if (m.latency.t_max) m.latency_margin_pct = latency_margin_pct(*m.latency.t_max, vc.latency_budget_us);
  double residual_sum = 0.0, decel_sum = 0.0;
  std::size_t residual_n = 0, decel_n = 0;
  for (const LatencyRecord& r : m.latency.records) {
    if (r.residual_m) residual_sum += *r.residual_m, ++residual_n;
    if (r.stop_decel) decel_sum += *r.stop_decel, ++decel_n;
  }
  if (residual_n) m.mean_residual_m = residual_sum / static_cast<double>(residual_n);
  if (decel_n) m.mean_stop_decel = decel_sum / static_cast<double>(decel_n);

  m.decisions = route_decisions(log);
  m.route_changes = count_route_changes(m.decisions);
  if (m.duration_s > 0.0) m.route_change_rate = route_change_rate(log, m.duration_s);

  Verdict rel;
  rel.name = "reliability";
  if (m.i2c_pdr) {
    rel.state = *m.i2c_pdr >= vc.min_pdr ? VerdictState::pass : VerdictState::fail;
    rel.detail = "I2C PDR " + fixed(*m.i2c_pdr * 100.0, 2) + "% (required >= " +
                 fixed(vc.min_pdr * 100.0, 0) + "%)";
  } else {
    rel.detail = "no I2C traffic";
  }
  Verdict lat;
  lat.name = "latency";
  if (m.latency.t_max) {
    lat.state = *m.latency.t_max <= vc.latency_budget_us ? VerdictState::pass : VerdictState::fail;
    lat.detail = "T_max " + ms(*m.latency.t_max) + " ms (budget " + ms(vc.latency_budget_us) +
                 " ms, margin " + fixed(*m.latency_margin_pct, 2) + "%)";
  } else {
    lat.detail = "no completed requisition";
  }
  Verdict stab;
  stab.name = "route_stability";
  if (!m.decisions.empty() && m.duration_s > 0.0) {
    stab.state = m.route_change_rate <= vc.max_route_change_rate ? VerdictState::pass : VerdictState::fail;
    stab.detail = fixed(m.route_change_rate, 3) + " changes/min (limit " +
                  fixed(vc.max_route_change_rate, 2) + ")";
  } else {
    stab.detail = "no route decisions";
  }
  m.verdicts = {rel, lat, stab};
  return m;
}

std::string format_text(const MetricsReport& m) {
  std::ostringstream o;
  o << "scenario " << (m.scenario.empty() ? "-" : m.scenario) << "  seed " << m.seed << "  duration "
    << fixed(m.duration_s, 1) << " s\n";
  o << "digest " << m.digest << "\n";
  o << "D_thre " << fixed(m.threshold_distance, 3) << " m (" << fixed(m.threshold_distance, 1)
    << " m)\n\n";

  o << "links\n";
  for (const LinkReport& l : m.links) {
    const auto pdr = l.stats.pdr();
    o << "  " << l.link << " " << l.stream << ": offered " << l.stats.offered << " delivered "
      << l.stats.delivered << " PDR " << (pdr ? fixed(*pdr * 100.0, 3) + "%" : std::string("-"))
      << " rate " << fixed(l.bitrate_bps() / 1000.0, 1) << " Kb/s\n";
  }
  o << "  I2C total PDR " << (m.i2c_pdr ? fixed(*m.i2c_pdr * 100.0, 3) + "%" : std::string("-"))
    << " over " << m.i2c_total.offered << " messages\n\n";

  o << "latency (ms)\n";
  if (m.latency.records.empty()) {
    o << "  no completed requisition\n";
  } else {
    o << "  seq node   T_local    T_comm  T_comm_req     T_exe   T_total  residual_m  decel\n";
    for (const LatencyRecord& r : m.latency.records) {
      char line[200];
      std::snprintf(line, sizeof line, "  %3u %4u %9s %9s %11s %9s %9s %11s %6s\n", r.seq,
                    r.intersection, ms(r.latency.t_local).c_str(), ms(r.latency.t_comm).c_str(),
                    ms(r.latency.t_comm_request).c_str(), ms(r.latency.t_exe).c_str(),
                    ms(r.latency.total()).c_str(),
                    r.residual_m ? fixed(*r.residual_m, 3).c_str() : "-",
                    r.stop_decel ? fixed(*r.stop_decel, 3).c_str() : "-");
      o << line;
    }
    o << "  T_max " << ms(*m.latency.t_max) << "  p50 " << ms(*m.latency.p50) << "  p95 "
      << ms(*m.latency.p95) << "  margin " << fixed(*m.latency_margin_pct, 2) << "% below 100 ms\n";
    if (m.mean_residual_m) o << "  mean residual distance " << fixed(*m.mean_residual_m, 3) << " m\n";
    if (m.mean_stop_decel) {
      o << "  mean required stop deceleration " << fixed(*m.mean_stop_decel, 3) << " m/s^2\n";
    }
  }
  o << "  timeouts " << m.timeouts << "  fallbacks " << m.fallbacks << "\n\n";

  o << "route decisions\n";
  for (const DecisionRecord& d : m.decisions) {
    o << "  t=" << fixed(static_cast<double>(d.time_us) * 1e-6, 3) << " s seq " << d.seq << " from "
      << d.start << ": " << (d.nodes.empty() ? d.status : join(d.nodes, '>')) << "\n";
  }
  o << "  changes " << m.route_changes << "  rate " << fixed(m.route_change_rate, 3) << " /min\n";
  for (const LapRecord& l : m.laps) o << "  lap " << l.lap << " driven " << join(l.nodes, '>') << "\n";
  o << "\n";

  for (const std::string& w : m.warnings) o << "warning: " << w << "\n";
  o << "verdicts\n";
  for (const Verdict& v : m.verdicts) {
    o << "  " << v.name << ": " << to_string(v.state) << "  " << v.detail << "\n";
  }
  return o.str();
}

void write_report(const MetricsReport& m, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create '" + dir.string() + "': " + ec.message());

  write_file(dir / "summary.txt", format_text(m));

  std::string lat = "seq,node,t_local_us,t_comm_us,t_comm_request_us,t_exe_us,t_total_us,residual_m,decel,decel_class\n";
  for (const LatencyRecord& r : m.latency.records) {
    lat += std::to_string(r.seq) + "," + std::to_string(r.intersection) + "," +
           std::to_string(r.latency.t_local) + "," + std::to_string(r.latency.t_comm) + "," +
           std::to_string(r.latency.t_comm_request) + "," + std::to_string(r.latency.t_exe) + "," +
           std::to_string(r.latency.total()) + "," +
           (r.residual_m ? format_number(*r.residual_m) : "") + "," +
           (r.stop_decel ? format_number(*r.stop_decel) : "") + "," + r.decel_class + "\n";
  }
  write_file(dir / "latency.csv", lat);

  std::string links = "link,stream,offered,delivered,dropped,out_of_range,unavailable,bytes_offered,bytes_delivered,pdr,bitrate_bps\n";
  for (const LinkReport& l : m.links) {
    const auto pdr = l.stats.pdr();
    links += l.link + "," + l.stream + "," + std::to_string(l.stats.offered) + "," +
             std::to_string(l.stats.delivered) + "," + std::to_string(l.stats.dropped) + "," +
             std::to_string(l.stats.dropped_out_of_range) + "," +
             std::to_string(l.stats.dropped_unavailable) + "," + std::to_string(l.stats.bytes_offered) +
             "," + std::to_string(l.stats.bytes_delivered) + "," + (pdr ? format_number(*pdr) : "") +
             "," + format_number(l.bitrate_bps()) + "\n";
  }
  write_file(dir / "links.csv", links);

  std::string dec = "time_us,seq,start,destination,status,nodes\n";
  for (const DecisionRecord& d : m.decisions) {
    dec += std::to_string(d.time_us) + "," + std::to_string(d.seq) + "," + std::to_string(d.start) +
           "," + std::to_string(d.destination) + "," + d.status + "," + join(d.nodes, ' ') + "\n";
  }
  write_file(dir / "decisions.csv", dec);

  std::string laps = "lap,time_us,nodes\n";
  for (const LapRecord& l : m.laps) {
    laps += std::to_string(l.lap) + "," + std::to_string(l.time_us) + "," + join(l.nodes, ' ') + "\n";
  }
  write_file(dir / "laps.csv", laps);

  std::string verdicts = "name,state,detail\n";
  for (const Verdict& v : m.verdicts) {
    verdicts += v.name + "," + std::string(to_string(v.state)) + ",\"" + v.detail + "\"\n";
  }
  write_file(dir / "verdicts.csv", verdicts);
}

}  // namespace smdt::harness
