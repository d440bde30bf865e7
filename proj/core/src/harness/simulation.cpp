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

#include "smdt/harness/simulation.hpp"

#include <algorithm>
#include <functional>

#include "smdt/cloud/route_service.hpp"
#include "smdt/world/event_queue.hpp"

namespace smdt::harness {

namespace {

using net::Message;
using world::EventKind;

constexpr std::uint32_t kUplinkSource = 0x10000;
constexpr std::uint32_t kDownlinkSource = 0x10001;

std::string join(const std::vector<NodeId>& nodes) {
  std::string out;
  for (NodeId n : nodes) {
    if (!out.empty()) out += ',';
    out += std::to_string(n);
  }
  return out;
}

std::string join_segments(const std::vector<SegmentId>& ids) { return join(ids); }

std::string num(double v) { return format_number(v); }
std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(std::uint32_t v) { return std::to_string(v); }

/// Arc length from `pos` along `route` to the end of the segment that
/// arrives at `node`.
std::optional<double> remaining_to(Vec2 pos, const road::Route& route, const road::RoadNetwork& net,
                                   NodeId node) {
  const road::RoutePosition at = road::locate_on_route(pos, route, net);
  double remaining = net.segment(route.segments[at.segment_index]).length - at.offset;
  for (std::size_t i = at.segment_index; i < route.segments.size(); ++i) {
    if (i > at.segment_index) remaining += net.segment(route.segments[i]).length;
    if (route.nodes[i + 1] == node) return remaining;
  }
  return std::nullopt;
}

/// Nodes from the planner's start node on; the first route node only marks
/// the segment the requester was on.
std::vector<NodeId> planned_part(const std::vector<NodeId>& nodes) {
  return nodes.size() > 1 ? std::vector<NodeId>(nodes.begin() + 1, nodes.end()) : nodes;
}

Micros period_of(double hz) { return static_cast<Micros>(std::llround(1e6 / hz)); }

class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed)
      : cfg_(cfg),
        seed_(seed),
        net_(build_network(cfg)),
        rng_(seed),
        up_("v2c/up", cfg.v2c),
        down_("v2c/down", cfg.v2c),
        cloud_(net_, cfg.rsus, cfg.congestion, cfg.run.waypoint_spacing),
        machine_(cfg.requisition),
        end_(SimTime::from_seconds(cfg.run.duration_s)) {
    for (const rsu::RsuConfig& r : cfg.rsus) {
      rsus_.push_back({r, rsu::Tracker(cfg.tracker), net::Link("i2c/" + std::to_string(r.id), cfg.i2c)});
    }
    actors_ = cfg.actors;
    std::ranges::sort(actors_, {}, &world::Actor::id);
    for (world::Actor& a : actors_) {
      const Vec2 d{rng_.normal(0.0, cfg.run.actor_jitter_m), rng_.normal(0.0, cfg.run.actor_jitter_m)};
      for (world::TrajectoryPoint& p : a.trajectory) p.position = p.position + d;
    }

    if (cfg.ego.default_route.empty()) {
      default_route_ = road::shortest_route(net_, cfg.ego.origin, cfg.ego.destination,
                                            road::length_weights(net_), cfg.run.algorithm);
    } else {
      default_route_ = route_through(cfg.ego.default_route);
    }
    // The vehicle carries its default route as a prerecorded file, so it has
    // the same precision as a downloaded one.
    default_wps_ = cloud::from_wire(
        cloud::to_wire(road::route_to_waypoints(default_route_, cfg.run.waypoint_spacing, net_)));
    reset_ego();
  }

  EventLog run() {
    log_.append(SimTime{0}, "run", "start",
                {{"scenario", cfg_.name.empty() ? "unnamed" : cfg_.name},
                 {"seed", num(seed_)},
                 {"duration_s", num(cfg_.run.duration_s)},
                 {"d_thre", num(machine_.threshold())},
                 {"v_f", num(cfg_.requisition.v_f)},
                 {"raw_upload", cfg_.upload.raw ? "1" : "0"}});
    log_.append(SimTime{0}, "ego", "default_route", {{"nodes", join(default_route_.nodes)}});

    periodic(SimTime{cfg_.run.tick_us}, cfg_.run.tick_us, EventKind::world_tick, 0, [this] { tick(); });
    for (std::size_t i = 0; i < rsus_.size(); ++i) {
      const rsu::RsuConfig& r = rsus_[i].cfg;
      periodic(SimTime{r.phase_us}, r.frame_period_us(), EventKind::rsu_frame, r.id,
               [this, i] { rsu_frame(i); });
      if (cfg_.upload.raw) {
        periodic(SimTime{r.phase_us}, period_of(cfg_.upload.raw_rate_hz), EventKind::raw_upload, r.id,
                 [this, i] { raw_upload(i); });
      }
    }
    periodic(SimTime{cfg_.run.cloud_sync_us}, cfg_.run.cloud_sync_us, EventKind::cloud_sync, 0,
             [this] { cloud_sync(); });

    const SimTime depart = SimTime::from_seconds(cfg_.ego.depart_s);
    if (depart <= end_) {
      q_.schedule(depart, EventKind::control, ego_source(), [this] {
        driving_ = true;
        log_.append(q_.now(), "ego", "depart", {{"lap", num(lap_)}});
      });
      periodic(depart, period_of(cfg_.ego.position_check_hz), EventKind::vehicle, ego_source(),
               [this] { position_check(); });
      periodic(depart, period_of(cfg_.ego.state_upload_hz), EventKind::vehicle, ego_source() + 1,
               [this] { upload_state(); });
    }

    q_.run_until(end_);
    finish();
    return std::move(log_);
  }

 private:
  struct RsuNode {
    rsu::RsuConfig cfg;
    rsu::Tracker tracker;
    net::Link link;
    std::uint32_t seq = 0;
    std::uint32_t raw_index = 0;
  };

  std::uint32_t ego_source() const { return 0x20000 + cfg_.ego.id; }
  std::uint16_t vehicle_id() const { return static_cast<std::uint16_t>(cfg_.ego.id); }

  road::Route route_through(const std::vector<NodeId>& nodes) {
    std::vector<SegmentId> segs;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      std::optional<SegmentId> link;
      for (SegmentId id : net_.outgoing(nodes[i - 1])) {
        if (net_.segment(id).to == nodes[i]) {
          link = id;
          break;
        }
      }
      if (!link) {
        throw Error(Errc::validation, "ego.default_route: no segment from node " +
                                          std::to_string(nodes[i - 1]) + " to " +
                                          std::to_string(nodes[i]));
      }
      segs.push_back(*link);
    }
    return road::route_from_segments(net_, std::move(segs));
  }

  void periodic(SimTime at, Micros period, EventKind kind, std::uint32_t source,
                std::function<void()> fn) {
    if (at > end_) return;
    q_.schedule(at, kind, source, [this, at, period, kind, source, fn] {
      fn();
      periodic(at + period, period, kind, source, fn);
    });
  }

  template <typename F>
  void transmit(net::Link& link, std::uint32_t source, const Message& msg, double distance_m,
                F on_delivery) {
    std::vector<std::uint8_t> bytes = net::encode(msg);
    const net::SendResult res = link.send(msg.type(), bytes.size(), q_.now(), distance_m, rng_);
    if (!res.delivered) {
      log_.append(q_.now(), "net", "drop",
                  {{"link", link.name()},
                   {"stream", net::to_string(msg.type())},
                   {"seq", num(msg.seq)},
                   {"reason", net::to_string(res.reason)}});
      return;
    }
    q_.schedule(res.deliver_at, EventKind::delivery, source,
                [this, bytes = std::move(bytes), on_delivery, name = link.name()] {
                  net::DecodeResult r = net::decode(bytes);
                  if (const auto* err = std::get_if<net::DecodeError>(&r)) {
                    log_.append(q_.now(), "net", "protocol_error",
                                {{"link", name}, {"reason", net::to_string(err->reason)}});
                    return;
                  }
                  on_delivery(std::get<Message>(r));
                });
  }

  // ---- world and ego ----

  void reset_ego() {
    const road::Waypoint& start = default_wps_.front();
    ego_.x = start.x;
    ego_.y = start.y;
    ego_.yaw = start.yaw;
    ego_.wheelbase = cfg_.ego.wheelbase;
    active_ = default_wps_;
    active_route_ = default_route_;
    track_index_ = 0;
    visited_ = {default_route_.nodes.front()};
  }

  void tick() {
    if (driving_) {
      const double dt = static_cast<double>(cfg_.run.tick_us) * 1e-6;
      const std::span<const road::Waypoint> path = std::span(active_).subspan(track_index_);
      const world::PursuitResult res = world::pure_pursuit_control(ego_, path, cfg_.ego.pursuit);
      if (res.exhausted) {
        finish_lap();
      } else {
        track_index_ += res.nearest;
        const world::AccelLimits limits{cfg_.requisition.a_comfy, 4.5, cfg_.ego.pursuit.max_steering};
        ego_ = world::integrate_bicycle(ego_, res.command, dt, limits);
        note_progress();
      }
    }
    sampled_at_ = q_.now();
  }

  void note_progress() {
    const road::RoutePosition at = road::locate_on_route(ego_.position(), active_route_, net_);
    const NodeId node = active_route_.nodes[at.segment_index];
    if (visited_.empty() || visited_.back() != node) visited_.push_back(node);
  }

  void finish_lap() {
    if (visited_.back() != active_route_.nodes.back()) visited_.push_back(active_route_.nodes.back());
    log_.append(q_.now(), "ego", "lap_complete", {{"lap", num(lap_)}, {"nodes", join(visited_)}});
    ++lap_;
    if (lap_ < cfg_.ego.laps) {
      reset_ego();
      machine_.reset_traversal();
      log_.append(q_.now(), "ego", "lap_start", {{"lap", num(lap_)}});
      return;
    }
    driving_ = false;
    ego_.speed = 0.0;
    log_.append(q_.now(), "ego", "arrived", {});
  }

  /// Ego position advanced from the last world tick to now.
  Vec2 ego_position_now() const {
    const double dt = static_cast<double>(q_.now() - sampled_at_) * 1e-6;
    return ego_.position() + Vec2{std::cos(ego_.yaw), std::sin(ego_.yaw)} * (ego_.speed * dt);
  }

  double base_station_distance() const { return ego_.position().norm(); }

  // ---- RSUs ----

  void rsu_frame(std::size_t i) {
    RsuNode& node = rsus_[i];
    const world::WorldSnapshot snap = world::snapshot_at(q_.now(), ego_, cfg_.ego.id, actors_);
    const std::vector<rsu::Detection> dets = rsu::sense(snap, node.cfg, rng_);
    rsu::PerceptionFrame frame{node.cfg.id, q_.now(), node.tracker.update(dets, q_.now())};
    transmit(node.link, node.cfg.id, rsu::make_tracking_message(frame, ++node.seq), 0.0,
             [this](const Message& m) { cloud_.ingest(rsu::frame_from_message(m)); });
  }

  void raw_upload(std::size_t i) {
    RsuNode& node = rsus_[i];
    // Point-cloud chunks are accounted by size; their content never matters.
    const std::size_t bytes = net::raw_chunk_wire_size(cfg_.upload.raw_chunk_bytes);
    const net::SendResult res = node.link.send(net::MsgType::raw_chunk, bytes, q_.now(), 0.0, rng_);
    ++node.raw_index;
    if (!res.delivered) {
      log_.append(q_.now(), "net", "drop",
                  {{"link", node.link.name()},
                   {"stream", "raw_chunk"},
                   {"seq", num(node.raw_index)},
                   {"reason", net::to_string(res.reason)}});
    }
  }

  // ---- cloud ----

  void cloud_sync() {
    const cloud::DtSnapshot& snap = cloud_.sync(q_.now());
    std::vector<SegmentId> congested = snap.congested_segments();
    if (congested == last_congested_) return;
    std::string occupancy;
    for (const auto& [seg, count] : snap.occupancy) {
      if (count == 0) continue;
      if (!occupancy.empty()) occupancy += ',';
      occupancy += std::to_string(seg) + ":" + std::to_string(count);
    }
    log_.append(q_.now(), "cloud", "congestion",
                {{"segments", join_segments(congested)}, {"occupancy", occupancy}});
    last_congested_ = std::move(congested);
  }

  void cloud_receive(const Message& m) {
    if (const auto* state = std::get_if<net::VehicleStatePayload>(&m.payload)) {
      cloud_.update_vehicle_position(m.source_id, {state->x, state->y});
      return;
    }
    const auto* req = std::get_if<net::RouteRequestPayload>(&m.payload);
    if (!req) {
      log_.append(q_.now(), "cloud", "unexpected_message", {{"type", net::to_string(m.type())}});
      return;
    }
    if (!req->url.empty()) {
      serve_route_file(m, req->url);
      return;
    }
    const Micros compute = cfg_.cloud_compute.draw(rng_);
    q_.schedule(q_.now() + compute, EventKind::cloud_work, m.source_id,
                [this, m] { plan_route(m); });
  }

  void plan_route(const Message& m) {
    const auto& p = std::get<net::RouteRequestPayload>(m.payload);
    const cloud::RouteRequest req{m.source_id, {p.x, p.y}, p.destination, q_.now()};
    const cloud::RouteDecision d =
        cloud::handle_route_request(req, cloud_.snapshot(), net_, cloud_.config(), cloud_.store(),
                                    cfg_.run.waypoint_spacing, cfg_.run.algorithm);
    const bool ok = d.response.status == net::RouteStatus::ok;
    log_.append(q_.now(), "cloud", "route_decision",
                {{"seq", num(m.seq)},
                 {"vehicle", num(std::uint32_t{m.source_id})},
                 {"start", num(d.start_node)},
                 {"dest", num(p.destination)},
                 {"status", ok ? "ok" : "no_route"},
                 {"nodes", d.route ? join(planned_part(d.route->nodes)) : ""},
                 {"route", d.route ? join(d.route->nodes) : ""},
                 {"congested", join_segments(cloud_.snapshot().congested_segments())},
                 {"url", d.response.route_url}});
    Message reply{0, m.seq, static_cast<std::uint64_t>(q_.now().us),
                  net::RouteResponsePayload{d.response.status, d.response.route_url}};
    transmit(down_, kDownlinkSource, reply, base_station_distance(),
             [this](const Message& r) { vehicle_receive(r); });
  }

  void serve_route_file(const Message& m, const std::string& url) {
    Message reply{0, m.seq, static_cast<std::uint64_t>(q_.now().us), {}};
    if (cloud_.store().contains(url)) {
      reply.payload = cloud_.store().payload(url);
    } else {
      reply.payload = net::RouteResponsePayload{net::RouteStatus::not_found, url};
    }
    transmit(down_, kDownlinkSource, reply, base_station_distance(),
             [this](const Message& r) { vehicle_receive(r); });
  }

  // ---- vehicle ----

  void upload_state() {
    Message m{vehicle_id(), ++state_seq_, static_cast<std::uint64_t>(q_.now().us),
              net::VehicleStatePayload{static_cast<float>(ego_.x), static_cast<float>(ego_.y),
                                       static_cast<float>(ego_.yaw), static_cast<float>(ego_.speed)}};
    transmit(up_, kUplinkSource, m, base_station_distance(),
             [this](const Message& r) { cloud_receive(r); });
  }

  void position_check() {
    if (!driving_) return;
    const Pose2 est = world::localize(ego_, cfg_.ego.localization_sigma, rng_);
    const vehicle::Action act = machine_.step(est.position(), active_route_, net_, q_.now());
    if (act.kind != vehicle::Action::Kind::send_request) return;

    pending_node_ = act.intersection;
    const auto true_d = remaining_to(ego_.position(), active_route_, net_, act.intersection);
    log_.append(q_.now(), "vehicle", "trigger",
                {{"seq", num(act.seq)},
                 {"node", num(act.intersection)},
                 {"distance", true_d ? num(*true_d) : "nan"}});
    const Micros t_local = cfg_.ego.t_local.draw(rng_);
    const std::uint32_t seq = act.seq;
    const Vec2 where = est.position();
    q_.schedule(q_.now() + t_local, EventKind::vehicle, ego_source(),
                [this, seq, where] { send_request(seq, where); });
  }

  void send_request(std::uint32_t seq, Vec2 where) {
    if (machine_.pending_seq() != seq || machine_.phase() != vehicle::Phase::awaiting_response) return;
    machine_.mark_sent(seq, q_.now());
    log_.append(q_.now(), "vehicle", "request_sent", {{"seq", num(seq)}});
    Message m{vehicle_id(), seq, static_cast<std::uint64_t>(q_.now().us),
              net::RouteRequestPayload{static_cast<float>(where.x), static_cast<float>(where.y),
                                       cfg_.ego.destination, ""}};
    transmit(up_, kUplinkSource, m, base_station_distance(),
             [this](const Message& r) { cloud_receive(r); });
    arm_timeout(seq, vehicle::Phase::awaiting_response);
  }

  void arm_timeout(std::uint32_t seq, vehicle::Phase phase) {
    q_.schedule(q_.now() + cfg_.requisition.response_timeout_us, EventKind::timeout, ego_source(),
                [this, seq, phase] {
                  const vehicle::Action act = machine_.on_timeout(seq, phase, q_.now());
                  if (act.kind == vehicle::Action::Kind::fallback) {
                    log_.append(q_.now(), "vehicle", "timeout",
                                {{"seq", num(seq)}, {"phase", std::string(vehicle::to_string(phase))}});
                  }
                  handle(act);
                });
  }

  void vehicle_receive(const Message& m) {
    vehicle::Action act;
    if (const auto* r = std::get_if<net::RouteResponsePayload>(&m.payload)) {
      if (machine_.phase() == vehicle::Phase::downloading && r->status != net::RouteStatus::ok) {
        act = machine_.on_protocol_error(m.seq, q_.now());
      } else {
        act = machine_.on_response(m.seq, r->status, r->url, q_.now());
      }
    } else if (const auto* f = std::get_if<net::RouteFilePayload>(&m.payload)) {
      act = machine_.on_route_file(m.seq, cloud::from_wire(*f), q_.now());
    }
    handle(act);
  }

  void handle(const vehicle::Action& act) {
    switch (act.kind) {
      case vehicle::Action::Kind::none:
      case vehicle::Action::Kind::send_request:
        return;
      case vehicle::Action::Kind::fallback:
        log_.append(q_.now(), "vehicle", "fallback", {{"seq", num(act.seq)}, {"reason", act.reason}});
        return;
      case vehicle::Action::Kind::fetch_route: {
        log_.append(q_.now(), "vehicle", "route_url", {{"seq", num(act.seq)}, {"url", act.url}});
        Message m{vehicle_id(), act.seq, static_cast<std::uint64_t>(q_.now().us),
                  net::RouteRequestPayload{static_cast<float>(ego_.x), static_cast<float>(ego_.y),
                                           cfg_.ego.destination, act.url}};
        transmit(up_, kUplinkSource, m, base_station_distance(),
                 [this](const Message& r) { cloud_receive(r); });
        arm_timeout(act.seq, vehicle::Phase::downloading);
        return;
      }
      case vehicle::Action::Kind::apply_route: {
        log_.append(q_.now(), "vehicle", "route_received",
                    {{"seq", num(act.seq)}, {"waypoints", num(std::uint64_t{act.waypoints.size()})}});
        const Micros t_exe = cfg_.ego.t_exe.draw(rng_);
        const std::uint32_t seq = act.seq;
        q_.schedule(q_.now() + t_exe, EventKind::vehicle, ego_source(),
                    [this, seq, wps = act.waypoints] { apply(seq, wps); });
        return;
      }
    }
  }

  void apply(std::uint32_t seq, const std::vector<road::Waypoint>& wps) {
    if (machine_.pending_seq() != seq || machine_.phase() != vehicle::Phase::applying) return;
    const Vec2 pos = ego_position_now();
    const auto residual = remaining_to(pos, active_route_, net_, pending_node_);

    vehicle::ApplyResult res =
        vehicle::apply_route(active_, wps, pos, cfg_.requisition.max_apply_offset);
    std::optional<road::Route> next_route;
    if (res.accepted && !res.unchanged) {
      try {
        next_route = road::infer_route(res.active, net_);
      } catch (const Error& e) {
        log_.append(q_.now(), "vehicle", "route_rejected", {{"seq", num(seq)}, {"reason", e.what()}});
        res.accepted = false;
      }
    }
    if (!res.accepted) {
      log_.append(q_.now(), "vehicle", "route_rejected",
                  {{"seq", num(seq)}, {"offset", num(res.offset)}});
    } else if (next_route) {
      active_ = std::move(res.active);
      active_route_ = std::move(*next_route);
      track_index_ = res.index;
    }
    const auto latency = machine_.complete_apply(seq, q_.now());

    std::vector<Field> fields{{"seq", num(seq)},
                              {"node", num(pending_node_)},
                              {"t_local", num(latency->t_local)},
                              {"t_comm", num(latency->t_comm)},
                              {"t_comm_request", num(latency->t_comm_request)},
                              {"t_exe", num(latency->t_exe)},
                              {"t_total", num(latency->total())},
                              {"speed", num(ego_.speed)}};
    if (residual) {
      fields.emplace_back("residual", num(*residual));
      try {
        const vehicle::StopDecel sd = vehicle::required_stop_decel(ego_.speed, *residual);
        fields.emplace_back("decel", num(sd.decel));
        fields.emplace_back("decel_class", std::string(vehicle::to_string(sd.classification)));
      } catch (const Error&) {
        fields.emplace_back("decel_class", "infeasible");
      }
    }
    fields.emplace_back("applied", res.accepted ? "1" : "0");
    fields.emplace_back("unchanged", res.unchanged ? "1" : "0");
    fields.emplace_back("route", join(active_route_.nodes));
    log_.append(q_.now(), "vehicle", "requisition", std::move(fields));
  }

  void finish() {
    auto emit = [this](const net::Link& link, const std::string& stream, const net::LinkStats& s) {
      log_.append(end_, "net", "link_stats",
                  {{"link", link.name()},
                   {"stream", stream},
                   {"offered", num(s.offered)},
                   {"delivered", num(s.delivered)},
                   {"dropped", num(s.dropped)},
                   {"out_of_range", num(s.dropped_out_of_range)},
                   {"unavailable", num(s.dropped_unavailable)},
                   {"bytes_offered", num(s.bytes_offered)},
                   {"bytes_delivered", num(s.bytes_delivered)}});
    };
    auto all = [&](const net::Link& link) {
      emit(link, "all", link.stats());
      for (const auto& [type, s] : link.stream_stats()) emit(link, net::to_string(type), s);
    };
    for (const RsuNode& r : rsus_) all(r.link);
    all(up_);
    all(down_);
    log_.append(end_, "run", "end",
                {{"duration_s", num(cfg_.run.duration_s)}, {"events", num(q_.executed())}});
  }

  const ScenarioConfig& cfg_;
  std::uint64_t seed_;
  road::RoadNetwork net_;
  Rng rng_;
  world::EventQueue q_;
  EventLog log_;
  std::vector<world::Actor> actors_;
  std::vector<RsuNode> rsus_;
  net::Link up_;
  net::Link down_;
  cloud::CloudTwin cloud_;
  vehicle::RequisitionMachine machine_;
  SimTime end_;

  road::Route default_route_;
  std::vector<road::Waypoint> default_wps_;
  world::EgoState ego_;
  SimTime sampled_at_{0};
  bool driving_ = false;
  std::uint32_t lap_ = 0;
  std::vector<road::Waypoint> active_;
  road::Route active_route_;
  std::size_t track_index_ = 0;
  std::vector<NodeId> visited_;
  NodeId pending_node_ = 0;
  std::uint32_t state_seq_ = 0;
  std::vector<SegmentId> last_congested_;
};

}  // namespace

EventLog simulate(const ScenarioConfig& config, std::uint64_t seed) {
  validate(config);
  return Simulation(config, seed).run();
}

RunResult run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  RunResult r;
  r.log = simulate(config, seed);
  r.metrics = compute_metrics(r.log);
  return r;
}

}  // namespace smdt::harness
