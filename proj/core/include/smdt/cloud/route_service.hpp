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

#ifndef SMDT_CLOUD_ROUTE_SERVICE_HPP_
#define SMDT_CLOUD_ROUTE_SERVICE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smdt/cloud/twin.hpp"
#include "smdt/net/wire.hpp"
#include "smdt/road/waypoints.hpp"

namespace smdt::cloud {

struct RouteRequest {
  std::uint16_t vehicle_id = 0;
  Vec2 position;
  NodeId destination = 0;
  SimTime timestamp;
};

struct RouteResponse {
  net::RouteStatus status = net::RouteStatus::ok;
  std::string route_url;
};

/// Append-only, in-memory store of planned routes. Each stored route gets a
/// fresh opaque URL `route://cloud/<vehicle_id>/<seq>`, even when its
/// content repeats an earlier one.
class RouteStore {
 public:
  std::string put(std::uint16_t vehicle_id, const std::vector<road::Waypoint>& waypoints);

  bool contains(const std::string& url) const { return routes_.contains(url); }
  /// Throws Error(not_found) for URLs this store never issued.
  const net::RouteFilePayload& payload(const std::string& url) const;
  std::vector<road::Waypoint> fetch(const std::string& url) const;
  /// Text waypoint file for `url`.
  std::string fetch_text(const std::string& url) const;

  std::size_t size() const { return routes_.size(); }

 private:
  std::map<std::string, net::RouteFilePayload> routes_;
  std::map<std::uint16_t, std::uint32_t> next_seq_;
};

net::RouteFilePayload to_wire(const std::vector<road::Waypoint>& waypoints);
std::vector<road::Waypoint> from_wire(const net::RouteFilePayload& payload);

struct RouteDecision {
  RouteResponse response;
  /// Node from which the planner searched (end of the vehicle's current
  /// segment).
  NodeId start_node = 0;
  std::optional<road::Route> route;
};

/// Plans from the node ahead of the requester under the snapshot's
/// congestion weights. The returned route begins with the requester's
/// current segment so the vehicle's pose lies on it.
RouteDecision handle_route_request(const RouteRequest& req, const DtSnapshot& snapshot,
                                   const road::RoadNetwork& network, const CongestionConfig& cfg,
                                   RouteStore& store,
                                   double waypoint_spacing = road::kDefaultWaypointSpacing,
                                   road::Algorithm algorithm = road::Algorithm::astar);

/// The cloud plane: buffers perception frames per RSU, rebuilds the twin
/// snapshot on every sync tick, and answers route requests from the latest
/// snapshot.
class CloudTwin {
 public:
  CloudTwin(const road::RoadNetwork& network, const std::vector<rsu::RsuConfig>& rsus,
            CongestionConfig cfg, double waypoint_spacing = road::kDefaultWaypointSpacing);

  void ingest(rsu::PerceptionFrame frame);
  void update_vehicle_position(std::uint16_t vehicle_id, Vec2 position);

  /// Synchronises channels, fuses, and recomputes occupancy at `now`.
  const DtSnapshot& sync(SimTime now);
  const DtSnapshot& snapshot() const { return snapshot_; }

  RouteDecision handle_route_request(const RouteRequest& req);
  RouteStore& store() { return store_; }
  const RouteStore& store() const { return store_; }
  const CongestionConfig& config() const { return cfg_; }

 private:
  const road::RoadNetwork& network_;
  std::map<RsuId, rsu::RsuConfig> rsus_;
  CongestionConfig cfg_;
  double spacing_;
  FrameBuffers buffers_;
  std::map<std::uint16_t, Vec2> vehicles_;
  DtSnapshot snapshot_;
  RouteStore store_;
};

}  // namespace smdt::cloud

#endif  // SMDT_CLOUD_ROUTE_SERVICE_HPP_
