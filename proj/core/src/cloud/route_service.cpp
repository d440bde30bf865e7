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

#include "smdt/cloud/route_service.hpp"

#include <sstream>

namespace smdt::cloud {

net::RouteFilePayload to_wire(const std::vector<road::Waypoint>& waypoints) {
  net::RouteFilePayload p;
  p.waypoints.reserve(waypoints.size());
  for (const road::Waypoint& w : waypoints) {
    p.waypoints.push_back({static_cast<float>(w.x), static_cast<float>(w.y), static_cast<float>(w.z),
                           static_cast<float>(w.yaw), static_cast<float>(w.velocity)});
  }
  return p;
}

std::vector<road::Waypoint> from_wire(const net::RouteFilePayload& payload) {
  std::vector<road::Waypoint> out;
  out.reserve(payload.waypoints.size());
  for (const net::WireWaypoint& w : payload.waypoints) out.push_back({w.x, w.y, w.z, w.yaw, w.velocity});
  return out;
}

std::string RouteStore::put(std::uint16_t vehicle_id, const std::vector<road::Waypoint>& waypoints) {
  const std::uint32_t seq = ++next_seq_[vehicle_id];
  std::string url = "route://cloud/" + std::to_string(vehicle_id) + "/" + std::to_string(seq);
  routes_.emplace(url, to_wire(waypoints));
  return url;
}

const net::RouteFilePayload& RouteStore::payload(const std::string& url) const {
  auto it = routes_.find(url);
  if (it == routes_.end()) throw Error(Errc::not_found, "unknown route url '" + url + "'");
  return it->second;
}

std::vector<road::Waypoint> RouteStore::fetch(const std::string& url) const {
  return from_wire(payload(url));
}

std::string RouteStore::fetch_text(const std::string& url) const {
  std::ostringstream out;
  road::write_waypoint_file(out, fetch(url));
  return out.str();
}

RouteDecision handle_route_request(const RouteRequest& req, const DtSnapshot& snapshot,
                                   const road::RoadNetwork& network, const CongestionConfig& cfg,
                                   RouteStore& store, double waypoint_spacing,
                                   road::Algorithm algorithm) {
  RouteDecision out;
  const road::SegmentProjection here = road::project_to_segment(req.position, network);
  const road::Segment& current = network.segment(here.segment_id);
  out.start_node = current.to;

  const road::SegmentWeights weights = congestion_weights(network, snapshot.congested, cfg);
  road::Route ahead;
  try {
    ahead = road::shortest_route(network, current.to, req.destination, weights, algorithm);
  } catch (const Error& e) {
    if (e.code() != Errc::no_route && e.code() != Errc::configuration) throw;
    out.response.status = net::RouteStatus::no_route;
    return out;
  }

  std::vector<SegmentId> chain{current.id};
  chain.insert(chain.end(), ahead.segments.begin(), ahead.segments.end());
  road::Route full = road::route_from_segments(network, std::move(chain), weights);
  const auto waypoints = road::route_to_waypoints(full, waypoint_spacing, network);
  out.response.route_url = store.put(req.vehicle_id, waypoints);
  out.route = std::move(full);
  return out;
}

CloudTwin::CloudTwin(const road::RoadNetwork& network, const std::vector<rsu::RsuConfig>& rsus,
                     CongestionConfig cfg, double waypoint_spacing)
    : network_(network), cfg_(cfg), spacing_(waypoint_spacing) {
  cfg_.validate();
  for (const rsu::RsuConfig& r : rsus) {
    rsus_.emplace(r.id, r);
    buffers_[r.id];
  }
}

void CloudTwin::ingest(rsu::PerceptionFrame frame) {
  buffers_[frame.rsu_id].push_back(std::move(frame));
}

void CloudTwin::update_vehicle_position(std::uint16_t vehicle_id, Vec2 position) {
  vehicles_[vehicle_id] = position;
}

const DtSnapshot& CloudTwin::sync(SimTime now) {
  // Frames older than the window can never be selected again.
  for (auto& [id, frames] : buffers_) {
    while (frames.size() > 1 && frames.front().timestamp < now - cfg_.staleness_window_us) {
      frames.pop_front();
    }
  }
  SyncResult synced = sync_channels(buffers_, now, cfg_);
  snapshot_.time = now;
  snapshot_.objects = fuse(synced.frames, rsus_, cfg_.fusion_gate);
  snapshot_.stale_rsus = std::move(synced.stale);

  std::optional<Vec2> ego;
  if (!vehicles_.empty()) ego = vehicles_.begin()->second;
  Occupancy occ = segment_occupancy(snapshot_.objects, network_, cfg_, ego);
  snapshot_.occupancy = std::move(occ.counts);
  snapshot_.congested = std::move(occ.congested);
  return snapshot_;
}

RouteDecision CloudTwin::handle_route_request(const RouteRequest& req) {
  return cloud::handle_route_request(req, snapshot_, network_, cfg_, store_, spacing_);
}

}  // namespace smdt::cloud
