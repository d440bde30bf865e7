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

#ifndef SMDT_TESTS_SUPPORT_HPP_
#define SMDT_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "smdt/road/routing.hpp"
#include "smdt/road/waypoints.hpp"

namespace smdt::testing {

// O(0) -> A(1) -> B(2) -> E(5), detour A -> D(3) -> C(4) -> B.
inline road::RoadNetwork square_network(double speed = 4.1667) {
  std::vector<road::Node> nodes{{0, {-60, 0}}, {1, {0, 0}},     {2, {200, 0}},
                                {3, {0, 200}}, {4, {200, 200}}, {5, {260, 0}}};
  auto seg = [&](SegmentId id, NodeId a, NodeId b) {
    return road::Segment::make(id, a, b, {nodes[a].position, nodes[b].position}, speed);
  };
  return road::RoadNetwork(nodes, {seg(1, 0, 1), seg(2, 1, 2), seg(3, 2, 5), seg(4, 1, 3),
                                   seg(5, 3, 4), seg(6, 4, 2)});
}

inline std::filesystem::path scenario_path(const char* name) {
  return std::filesystem::path(SMDT_SCENARIO_DIR) / name;
}

// Reference shortest path: enumerate every simple path, keep the cheapest,
// break cost ties by the lexicographically smallest node sequence.
inline std::optional<std::pair<double, std::vector<NodeId>>> enumerate_best(const road::RoadNetwork& net,
                                                                            NodeId from, NodeId to,
                                                                            const road::SegmentWeights& w) {
  std::optional<std::pair<double, std::vector<NodeId>>> best;
  std::vector<NodeId> path{from};
  std::function<void(NodeId, double)> dfs = [&](NodeId u, double cost) {
    if (u == to) {
      const bool tie = best && std::abs(cost - best->first) <= 1e-9 * std::max(1.0, cost);
      if (!best || (!tie && cost < best->first) || (tie && path < best->second)) best = {{cost, path}};
      return;
    }
    for (SegmentId sid : net.outgoing(u)) {
      const road::Segment& s = net.segment(sid);
      if (std::find(path.begin(), path.end(), s.to) != path.end()) continue;
      path.push_back(s.to);
      dfs(s.to, cost + w.at(sid));
      path.pop_back();
    }
  };
  dfs(from, 0.0);
  return best;
}

/// Random directed graph with up to `max_nodes` nodes and small integer
/// weights, so equal-cost ties are common.
struct RandomGraph {
  road::RoadNetwork net;
  road::SegmentWeights weights;
  NodeId nodes = 0;
};

inline RandomGraph random_graph(Rng& rng, NodeId max_nodes) {
  RandomGraph g;
  g.nodes = static_cast<NodeId>(2 + rng.next() % (max_nodes - 1));
  std::vector<road::Node> nodes;
  for (NodeId i = 0; i < g.nodes; ++i) nodes.push_back({i, {rng.uniform(0, 100), rng.uniform(0, 100)}});
  std::vector<road::Segment> segs;
  SegmentId next = 1;
  for (NodeId a = 0; a < g.nodes; ++a) {
    for (NodeId b = 0; b < g.nodes; ++b) {
      if (a == b || rng.uniform() > 0.45) continue;
      segs.push_back(road::Segment::make(next, a, b, {nodes[a].position, nodes[b].position}, 1.0));
      g.weights[next] = static_cast<double>(1 + rng.next() % 4);
      ++next;
    }
  }
  g.net = road::RoadNetwork(nodes, segs);
  return g;
}

/// Disagreements between both planners and enumeration over every ordered
/// node pair of `count` random graphs.
inline int routing_mismatches(std::uint64_t seed, int count, NodeId max_nodes) {
  Rng rng(seed);
  int mismatches = 0;
  for (int i = 0; i < count; ++i) {
    const RandomGraph g = random_graph(rng, max_nodes);
    for (NodeId a = 0; a < g.nodes; ++a) {
      for (NodeId b = 0; b < g.nodes; ++b) {
        if (a == b) continue;
        const auto expect = enumerate_best(g.net, a, b, g.weights);
        for (road::Algorithm alg : {road::Algorithm::dijkstra, road::Algorithm::astar}) {
          try {
            const road::Route r = road::shortest_route(g.net, a, b, g.weights, alg);
            if (!expect || r.nodes != expect->second || std::abs(r.total_cost - expect->first) > 1e-9) {
              ++mismatches;
            }
          } catch (const Error& e) {
            if (expect || e.code() != Errc::no_route) ++mismatches;
          }
        }
      }
    }
  }
  return mismatches;
}

inline std::vector<road::Waypoint> straight_path(double length, double spacing, double v) {
  std::vector<road::Waypoint> out;
  for (double s = 0.0; s <= length + 1e-9; s += spacing) out.push_back({s, 0, 0, 0, v});
  return out;
}

// Counter-clockwise circle centred at (0, r), starting at the origin heading +x.
inline std::vector<road::Waypoint> circle_path(double r, int laps, double spacing, double v) {
  std::vector<road::Waypoint> out;
  const int n = static_cast<int>(std::ceil(2 * std::numbers::pi * r * laps / spacing));
  for (int i = 0; i <= n; ++i) {
    const double th = i * spacing / r;
    out.push_back({r * std::sin(th), r - r * std::cos(th), 0, wrap_angle(th), v});
  }
  return out;
}

}  // namespace smdt::testing

#endif  // SMDT_TESTS_SUPPORT_HPP_
