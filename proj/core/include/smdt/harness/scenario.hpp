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

#ifndef SMDT_HARNESS_SCENARIO_HPP_
#define SMDT_HARNESS_SCENARIO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "smdt/cloud/twin.hpp"
#include "smdt/net/link.hpp"
#include "smdt/road/routing.hpp"
#include "smdt/vehicle/requisition.hpp"
#include "smdt/world/control.hpp"

namespace smdt::harness {

/// Processing delay drawn uniformly from [lo, hi] milliseconds.
struct DelayRange {
  double lo_ms = 0.0;
  double hi_ms = 0.0;

  Micros draw(Rng& rng) const;
};

struct EgoConfig {
  ActorId id = 1000;
  NodeId origin = 0;
  NodeId destination = 0;
  /// Node sequence of the prerecorded route; empty means shortest by length.
  std::vector<NodeId> default_route;
  double wheelbase = 2.7;
  double localization_sigma = 0.0;  // m
  double position_check_hz = 20.0;
  double state_upload_hz = 10.0;
  double depart_s = 0.0;
  /// Number of traversals; each lap restarts at the origin.
  std::uint32_t laps = 1;
  world::PursuitParams pursuit;
  DelayRange t_local{8.0, 14.0};
  DelayRange t_exe{6.0, 12.0};
};

struct UploadConfig {
  bool raw = false;
  std::uint32_t raw_chunk_bytes = 575'000;
  double raw_rate_hz = 10.0;
};

struct RunConfig {
  double duration_s = 60.0;
  std::uint64_t seed = 1;
  Micros tick_us = 10'000;
  Micros cloud_sync_us = 100'000;
  double waypoint_spacing = road::kDefaultWaypointSpacing;
  road::Algorithm algorithm = road::Algorithm::astar;
  /// Gaussian perturbation of scripted actor positions, drawn per seed.
  double actor_jitter_m = 0.0;
};

struct ScenarioConfig {
  std::string name;
  std::vector<road::Node> nodes;
  std::vector<road::Segment> segments;
  std::vector<rsu::RsuConfig> rsus;
  rsu::TrackerConfig tracker;
  std::vector<world::Actor> actors;
  EgoConfig ego;
  net::LinkModel i2c = net::LinkModel::ethernet();
  net::LinkModel v2c = net::LinkModel::wimax();
  UploadConfig upload;
  cloud::CongestionConfig congestion;
  DelayRange cloud_compute{4.0, 8.0};
  vehicle::RequisitionConfig requisition;
  RunConfig run;
};

/// Every problem found, one "field: message" entry each. Empty when valid.
std::vector<std::string> validation_errors(const ScenarioConfig& cfg);

/// Throws Error(validation) listing every offending field.
void validate(const ScenarioConfig& cfg);

/// Parses YAML text; throws Error(configuration) on syntax or type errors
/// and Error(validation) when the result does not validate.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

road::RoadNetwork build_network(const ScenarioConfig& cfg);

}  // namespace smdt::harness

#endif  // SMDT_HARNESS_SCENARIO_HPP_
