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

#include "smdt/harness/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace smdt::harness {

Micros DelayRange::draw(Rng& rng) const {
  return static_cast<Micros>(std::llround(rng.uniform(lo_ms, hi_ms) * 1000.0));
}

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(Errc::configuration, field + ": " + what);
}

template <typename T>
T as(const YAML::Node& n, const std::string& field) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    bad(field, "has the wrong type");
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, T& out, const std::string& prefix) {
  if (const YAML::Node n = parent[key]) out = as<T>(n, prefix + "." + key);
}

Micros ms_to_us(double ms) { return static_cast<Micros>(std::llround(ms * 1000.0)); }

Vec2 read_point(const YAML::Node& n, const std::string& field) {
  if (!n.IsSequence() || n.size() != 2) bad(field, "expected [x, y]");
  return {as<double>(n[0], field), as<double>(n[1], field)};
}

DelayRange read_delay(const YAML::Node& n, const std::string& field) {
  if (!n.IsSequence() || n.size() != 2) bad(field, "expected [lo_ms, hi_ms]");
  return {as<double>(n[0], field), as<double>(n[1], field)};
}

void read_network(const YAML::Node& root, ScenarioConfig& cfg) {
  const YAML::Node net = root["network"];
  if (!net) bad("network", "section is required");
  std::map<NodeId, Vec2> where;
  const YAML::Node nodes = net["nodes"];
  if (!nodes || !nodes.IsSequence()) bad("network.nodes", "expected a list");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string f = "network.nodes[" + std::to_string(i) + "]";
    road::Node n;
    n.id = as<NodeId>(nodes[i]["id"], f + ".id");
    n.position = {as<double>(nodes[i]["x"], f + ".x"), as<double>(nodes[i]["y"], f + ".y")};
    where[n.id] = n.position;
    cfg.nodes.push_back(n);
  }
  const YAML::Node segs = net["segments"];
  if (!segs || !segs.IsSequence()) bad("network.segments", "expected a list");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string f = "network.segments[" + std::to_string(i) + "]";
    const YAML::Node s = segs[i];
    const auto id = as<SegmentId>(s["id"], f + ".id");
    const auto from = as<NodeId>(s["from"], f + ".from");
    const auto to = as<NodeId>(s["to"], f + ".to");
    const double speed = as<double>(s["speed"], f + ".speed");
    std::vector<Vec2> poly;
    if (const YAML::Node p = s["polyline"]) {
      if (!p.IsSequence()) bad(f + ".polyline", "expected a list of points");
      for (std::size_t k = 0; k < p.size(); ++k) {
        poly.push_back(read_point(p[k], f + ".polyline[" + std::to_string(k) + "]"));
      }
    } else {
      if (!where.contains(from)) bad(f + ".from", "unknown node " + std::to_string(from));
      if (!where.contains(to)) bad(f + ".to", "unknown node " + std::to_string(to));
      poly = {where[from], where[to]};
    }
    cfg.segments.push_back(road::Segment::make(id, from, to, std::move(poly), speed));
  }
}

void read_rsus(const YAML::Node& root, ScenarioConfig& cfg) {
  const YAML::Node rsus = root["rsus"];
  if (!rsus) return;
  if (!rsus.IsSequence()) bad("rsus", "expected a list");
  for (std::size_t i = 0; i < rsus.size(); ++i) {
    const std::string f = "rsus[" + std::to_string(i) + "]";
    const YAML::Node r = rsus[i];
    rsu::RsuConfig c;
    c.id = as<RsuId>(r["id"], f + ".id");
    c.pose = {as<double>(r["x"], f + ".x"), as<double>(r["y"], f + ".y"), 0.0};
    read(r, "yaw", c.pose.yaw, f);
    read(r, "range", c.sensing_range, f);
    read(r, "rate_hz", c.update_rate_hz, f);
    read(r, "detection_prob", c.detection_prob, f);
    read(r, "noise_sigma", c.position_noise_sigma, f);
    double phase_ms = 0.0;
    read(r, "phase_ms", phase_ms, f);
    c.phase_us = ms_to_us(phase_ms);
    cfg.rsus.push_back(c);
  }
  if (const YAML::Node t = root["tracker"]) {
    read(t, "gate", cfg.tracker.gate_radius, "tracker");
    read(t, "max_misses", cfg.tracker.max_misses, "tracker");
    read(t, "alpha", cfg.tracker.alpha, "tracker");
    read(t, "beta", cfg.tracker.beta, "tracker");
  }
}

void read_actors(const YAML::Node& root, ScenarioConfig& cfg) {
  const YAML::Node actors = root["actors"];
  if (!actors) return;
  if (!actors.IsSequence()) bad("actors", "expected a list");
  for (std::size_t i = 0; i < actors.size(); ++i) {
    const std::string f = "actors[" + std::to_string(i) + "]";
    const YAML::Node a = actors[i];
    world::Actor actor;
    actor.id = as<ActorId>(a["id"], f + ".id");
    const auto cls = world::parse_actor_class(as<std::string>(a["class"], f + ".class"));
    if (!cls) bad(f + ".class", "expected vehicle, pedestrian or other");
    actor.actor_class = *cls;
    if (const YAML::Node s = a["size"]) {
      if (!s.IsSequence() || s.size() != 3) bad(f + ".size", "expected [length, width, height]");
      actor.footprint = {as<double>(s[0], f + ".size"), as<double>(s[1], f + ".size"),
                         as<double>(s[2], f + ".size")};
    } else if (actor.actor_class == world::ActorClass::vehicle) {
      actor.footprint = {4.5, 1.8, 1.5};
    } else {
      actor.footprint = {0.6, 0.6, 1.7};
    }
    if (const YAML::Node p = a["position"]) {
      actor.trajectory.push_back({SimTime{0}, read_point(p, f + ".position")});
    } else if (const YAML::Node t = a["trajectory"]) {
      if (!t.IsSequence()) bad(f + ".trajectory", "expected a list of [t_s, x, y]");
      for (std::size_t k = 0; k < t.size(); ++k) {
        const std::string pf = f + ".trajectory[" + std::to_string(k) + "]";
        if (!t[k].IsSequence() || t[k].size() != 3) bad(pf, "expected [t_s, x, y]");
        actor.trajectory.push_back({SimTime::from_seconds(as<double>(t[k][0], pf)),
                                    {as<double>(t[k][1], pf), as<double>(t[k][2], pf)}});
      }
    } else {
      bad(f, "needs a position or a trajectory");
    }
    if (const YAML::Node n = a["appear_s"]) actor.appear = SimTime::from_seconds(as<double>(n, f + ".appear_s"));
    if (const YAML::Node n = a["disappear_s"]) {
      actor.disappear = SimTime::from_seconds(as<double>(n, f + ".disappear_s"));
    }
    cfg.actors.push_back(std::move(actor));
  }
}

void read_ego(const YAML::Node& root, ScenarioConfig& cfg) {
  const YAML::Node e = root["ego"];
  if (!e) bad("ego", "section is required");
  EgoConfig& ego = cfg.ego;
  read(e, "id", ego.id, "ego");
  ego.origin = as<NodeId>(e["origin"], "ego.origin");
  ego.destination = as<NodeId>(e["destination"], "ego.destination");
  read(e, "default_route", ego.default_route, "ego");
  read(e, "wheelbase", ego.wheelbase, "ego");
  read(e, "localization_sigma", ego.localization_sigma, "ego");
  read(e, "position_check_hz", ego.position_check_hz, "ego");
  read(e, "state_upload_hz", ego.state_upload_hz, "ego");
  read(e, "depart_s", ego.depart_s, "ego");
  read(e, "laps", ego.laps, "ego");
  read(e, "lookahead_gain", ego.pursuit.lookahead_gain, "ego");
  read(e, "min_lookahead", ego.pursuit.min_lookahead, "ego");
  read(e, "max_steering", ego.pursuit.max_steering, "ego");
  if (const YAML::Node n = e["t_local_ms"]) ego.t_local = read_delay(n, "ego.t_local_ms");
  if (const YAML::Node n = e["t_exe_ms"]) ego.t_exe = read_delay(n, "ego.t_exe_ms");
}

net::LinkModel read_link(const YAML::Node& n, const std::string& f, net::LinkModel model) {
  if (const YAML::Node p = n["preset"]) {
    const auto name = as<std::string>(p, f + ".preset");
    if (name == "ethernet") {
      model = net::LinkModel::ethernet();
    } else if (name == "wimax") {
      model = net::LinkModel::wimax();
    } else if (name == "wifi") {
      model = net::LinkModel::wifi();
    } else if (name == "wigig") {
      model = net::LinkModel::wigig();
    } else {
      bad(f + ".preset", "unknown preset '" + name + "'");
    }
  }
  if (const YAML::Node v = n["bandwidth_mbps"]) model.bandwidth_bps = as<double>(v, f + ".bandwidth_mbps") * 1e6;
  if (const YAML::Node v = n["base_latency_ms"]) model.base_latency_us = ms_to_us(as<double>(v, f + ".base_latency_ms"));
  if (const YAML::Node v = n["jitter_ms"]) model.jitter_sigma_us = as<double>(v, f + ".jitter_ms") * 1000.0;
  read(n, "loss_prob", model.loss_prob, f);
  read(n, "coverage_m", model.coverage_m, f);
  if (const YAML::Node o = n["outages"]) {
    if (!o.IsSequence()) bad(f + ".outages", "expected a list of [start_s, end_s]");
    for (std::size_t k = 0; k < o.size(); ++k) {
      const std::string of = f + ".outages[" + std::to_string(k) + "]";
      if (!o[k].IsSequence() || o[k].size() != 2) bad(of, "expected [start_s, end_s]");
      model.outages.emplace_back(SimTime::from_seconds(as<double>(o[k][0], of)),
                                 SimTime::from_seconds(as<double>(o[k][1], of)));
    }
  }
  return model;
}

void read_rest(const YAML::Node& root, ScenarioConfig& cfg) {
  if (const YAML::Node l = root["links"]) {
    if (const YAML::Node n = l["i2c"]) cfg.i2c = read_link(n, "links.i2c", cfg.i2c);
    if (const YAML::Node n = l["v2c"]) cfg.v2c = read_link(n, "links.v2c", cfg.v2c);
  }
  if (const YAML::Node u = root["upload"]) {
    read(u, "raw", cfg.upload.raw, "upload");
    read(u, "raw_chunk_bytes", cfg.upload.raw_chunk_bytes, "upload");
    read(u, "raw_rate_hz", cfg.upload.raw_rate_hz, "upload");
  }
  if (const YAML::Node c = root["congestion"]) {
    cloud::CongestionConfig& cc = cfg.congestion;
    read(c, "threshold", cc.occupancy_threshold, "congestion");
    read(c, "penalty", cc.penalty_factor, "congestion");
    read(c, "lateral_bound", cc.lateral_bound, "congestion");
    if (const YAML::Node n = c["staleness_ms"]) cc.staleness_window_us = ms_to_us(as<double>(n, "congestion.staleness_ms"));
    read(c, "fusion_gate", cc.fusion_gate, "congestion");
    read(c, "ego_exclusion_radius", cc.ego_exclusion_radius, "congestion");
  }
  if (const YAML::Node c = root["cloud"]) {
    if (const YAML::Node n = c["compute_ms"]) cfg.cloud_compute = read_delay(n, "cloud.compute_ms");
  }
  if (const YAML::Node r = root["requisition"]) {
    vehicle::RequisitionConfig& rc = cfg.requisition;
    read(r, "v_f", rc.v_f, "requisition");
    read(r, "a_comfy", rc.a_comfy, "requisition");
    read(r, "kmh_braking_coeff", rc.kmh_braking_coeff, "requisition");
    if (const YAML::Node n = r["timeout_ms"]) rc.response_timeout_us = ms_to_us(as<double>(n, "requisition.timeout_ms"));
    read(r, "max_apply_offset", rc.max_apply_offset, "requisition");
  }
  if (const YAML::Node r = root["run"]) {
    RunConfig& run = cfg.run;
    read(r, "duration_s", run.duration_s, "run");
    read(r, "seed", run.seed, "run");
    if (const YAML::Node n = r["tick_ms"]) run.tick_us = ms_to_us(as<double>(n, "run.tick_ms"));
    if (const YAML::Node n = r["cloud_sync_ms"]) run.cloud_sync_us = ms_to_us(as<double>(n, "run.cloud_sync_ms"));
    read(r, "waypoint_spacing", run.waypoint_spacing, "run");
    read(r, "actor_jitter_m", run.actor_jitter_m, "run");
    if (const YAML::Node n = r["routing"]) {
      const auto name = as<std::string>(n, "run.routing");
      if (name == "astar") {
        run.algorithm = road::Algorithm::astar;
      } else if (name == "dijkstra") {
        run.algorithm = road::Algorithm::dijkstra;
      } else {
        bad("run.routing", "expected astar or dijkstra");
      }
    }
  }
}

template <typename F>
void check(std::vector<std::string>& errors, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    errors.emplace_back(e.what());
  }
}

}  // namespace

std::vector<std::string> validation_errors(const ScenarioConfig& cfg) {
  std::vector<std::string> errors;
  auto need = [&](bool ok, std::string msg) {
    if (!ok) errors.push_back(std::move(msg));
  };

  std::optional<road::RoadNetwork> net;
  check(errors, [&] { net.emplace(cfg.nodes, cfg.segments); });
  if (net) {
    need(net->has_node(cfg.ego.origin), "ego.origin: unknown node " + std::to_string(cfg.ego.origin));
    need(net->has_node(cfg.ego.destination),
         "ego.destination: unknown node " + std::to_string(cfg.ego.destination));
    for (NodeId n : cfg.ego.default_route) {
      need(net->has_node(n), "ego.default_route: unknown node " + std::to_string(n));
    }
  }
  if (!cfg.ego.default_route.empty()) {
    need(cfg.ego.default_route.front() == cfg.ego.origin &&
             cfg.ego.default_route.back() == cfg.ego.destination,
         "ego.default_route: must run from origin to destination");
  }
  need(cfg.ego.origin != cfg.ego.destination, "ego.destination: must differ from origin");
  need(cfg.ego.wheelbase > 0.0, "ego.wheelbase: must be > 0");
  need(cfg.ego.localization_sigma >= 0.0, "ego.localization_sigma: must be >= 0");
  need(cfg.ego.position_check_hz > 0.0, "ego.position_check_hz: must be > 0");
  need(cfg.ego.state_upload_hz > 0.0, "ego.state_upload_hz: must be > 0");
  need(cfg.ego.depart_s >= 0.0, "ego.depart_s: must be >= 0");
  need(cfg.ego.laps >= 1, "ego.laps: must be >= 1");
  need(cfg.ego.pursuit.min_lookahead > 0.0, "ego.min_lookahead: must be > 0");
  need(cfg.ego.pursuit.lookahead_gain >= 0.0, "ego.lookahead_gain: must be >= 0");
  for (const auto& [name, d] : {std::pair{"ego.t_local_ms", cfg.ego.t_local},
                                std::pair{"ego.t_exe_ms", cfg.ego.t_exe},
                                std::pair{"cloud.compute_ms", cfg.cloud_compute}}) {
    need(d.lo_ms >= 0.0 && d.hi_ms >= d.lo_ms, std::string(name) + ": need 0 <= lo <= hi");
  }

  std::set<RsuId> rsu_ids;
  for (const rsu::RsuConfig& r : cfg.rsus) {
    need(rsu_ids.insert(r.id).second, "rsus: duplicate id " + std::to_string(r.id));
    check(errors, [&] { r.validate(); });
  }
  need(cfg.tracker.gate_radius > 0.0, "tracker.gate: must be > 0");
  need(cfg.tracker.alpha > 0.0 && cfg.tracker.alpha <= 1.0, "tracker.alpha: must lie in (0, 1]");
  need(cfg.tracker.beta >= 0.0 && cfg.tracker.beta <= 2.0, "tracker.beta: must lie in [0, 2]");

  std::set<ActorId> actor_ids{cfg.ego.id};
  for (const world::Actor& a : cfg.actors) {
    need(actor_ids.insert(a.id).second, "actors: id " + std::to_string(a.id) + " is not unique");
    check(errors, [&] { a.validate(); });
  }

  check(errors, [&] { cfg.i2c.validate(); });
  check(errors, [&] { cfg.v2c.validate(); });
  need(cfg.upload.raw_chunk_bytes > 0, "upload.raw_chunk_bytes: must be > 0");
  need(cfg.upload.raw_rate_hz > 0.0, "upload.raw_rate_hz: must be > 0");
  check(errors, [&] { cfg.congestion.validate(); });
  check(errors, [&] { cfg.requisition.validate(); });

  need(cfg.run.duration_s > 0.0, "run.duration_s: must be > 0");
  need(cfg.run.tick_us > 0, "run.tick_ms: must be > 0");
  need(cfg.run.cloud_sync_us > 0, "run.cloud_sync_ms: must be > 0");
  need(cfg.run.waypoint_spacing > 0.0, "run.waypoint_spacing: must be > 0");
  need(cfg.run.actor_jitter_m >= 0.0, "run.actor_jitter_m: must be >= 0");
  return errors;
}

void validate(const ScenarioConfig& cfg) {
  const auto errors = validation_errors(cfg);
  if (errors.empty()) return;
  std::string msg = "invalid scenario:";
  for (const std::string& e : errors) msg += "\n  " + e;
  throw Error(Errc::validation, msg);
}

ScenarioConfig parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(Errc::configuration, std::string("scenario is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw Error(Errc::configuration, "scenario must be a mapping");
  ScenarioConfig cfg;
  read(root, "name", cfg.name, "scenario");
  read_network(root, cfg);
  read_rsus(root, cfg);
  read_actors(root, cfg);
  read_ego(root, cfg);
  read_rest(root, cfg);
  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open scenario '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

road::RoadNetwork build_network(const ScenarioConfig& cfg) {
  return road::RoadNetwork(cfg.nodes, cfg.segments);
}

}  // namespace smdt::harness
