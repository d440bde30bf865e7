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

#include <benchmark/benchmark.h>

#include "smdt/road/routing.hpp"

namespace {

using namespace smdt;

// n x n grid with two-way streets 100 m apart.
road::RoadNetwork grid(NodeId n) {
  std::vector<road::Node> nodes;
  std::vector<road::Segment> segs;
  for (NodeId r = 0; r < n; ++r) {
    for (NodeId c = 0; c < n; ++c) nodes.push_back({r * n + c, {100.0 * c, 100.0 * r}});
  }
  SegmentId id = 1;
  auto link = [&](NodeId a, NodeId b) {
    segs.push_back(road::Segment::make(id++, a, b, {nodes[a].position, nodes[b].position}, 8.0));
    segs.push_back(road::Segment::make(id++, b, a, {nodes[b].position, nodes[a].position}, 8.0));
  };
  for (NodeId r = 0; r < n; ++r) {
    for (NodeId c = 0; c < n; ++c) {
      if (c + 1 < n) link(r * n + c, r * n + c + 1);
      if (r + 1 < n) link(r * n + c, (r + 1) * n + c);
    }
  }
  return road::RoadNetwork(nodes, segs);
}

void run(benchmark::State& state, road::Algorithm alg) {
  const auto n = static_cast<NodeId>(state.range(0));
  const road::RoadNetwork net = grid(n);
  const road::SegmentWeights w = road::length_weights(net);
  for (auto _ : state) benchmark::DoNotOptimize(road::shortest_route(net, 0, n * n - 1, w, alg));
}

void BM_Dijkstra(benchmark::State& state) { run(state, road::Algorithm::dijkstra); }
void BM_AStar(benchmark::State& state) { run(state, road::Algorithm::astar); }
BENCHMARK(BM_Dijkstra)->Arg(10)->Arg(30);
BENCHMARK(BM_AStar)->Arg(10)->Arg(30);

}  // namespace
