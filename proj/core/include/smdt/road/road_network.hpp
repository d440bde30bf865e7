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

#ifndef SMDT_ROAD_ROAD_NETWORK_HPP_
#define SMDT_ROAD_ROAD_NETWORK_HPP_

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "smdt/common.hpp"

namespace smdt::road {

struct Node {
  NodeId id = 0;
  Vec2 position;
};

/// Directed road section between two nodes. The polyline starts at the
/// `from` node and ends at the `to` node.
struct Segment {
  SegmentId id = 0;
  NodeId from = 0;
  NodeId to = 0;
  std::vector<Vec2> polyline;
  double length = 0.0;
  double free_flow_speed = 0.0;

  /// Builds a segment whose length is the arc length of `polyline`.
  static Segment make(SegmentId id, NodeId from, NodeId to,
                      std::vector<Vec2> polyline, double free_flow_speed);
};

struct SegmentProjection {
  SegmentId segment_id = 0;
  double longitudinal_offset = 0.0;
  double lateral_distance = 0.0;
};

/// Directed road graph with geometry. Nodes and segments are kept sorted by
/// id so iteration order is deterministic.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  /// Throws Error(configuration) when a segment references a missing node,
  /// its polyline does not start/end on its nodes, ids repeat, or the
  /// stored length disagrees with the polyline arc length.
  RoadNetwork(std::vector<Node> nodes, std::vector<Segment> segments);

  bool empty() const { return segments_.empty(); }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Segment> segments() const { return segments_; }

  bool has_node(NodeId id) const { return node_index_.contains(id); }
  bool has_segment(SegmentId id) const { return segment_index_.contains(id); }
  const Node& node(NodeId id) const;
  const Segment& segment(SegmentId id) const;

  /// Segments leaving `id`, ascending by segment id.
  std::span<const SegmentId> outgoing(NodeId id) const;

  /// Number of distinct nodes adjacent to `id`, ignoring direction.
  std::size_t degree(NodeId id) const;
  /// Intersections are nodes with degree >= 3; degree-2 nodes only carry
  /// geometry.
  bool is_intersection(NodeId id) const { return degree(id) >= 3; }

  double max_free_flow_speed() const { return max_speed_; }

 private:
  std::vector<Node> nodes_;
  std::vector<Segment> segments_;
  std::unordered_map<NodeId, std::size_t> node_index_;
  std::unordered_map<SegmentId, std::size_t> segment_index_;
  std::unordered_map<NodeId, std::vector<SegmentId>> outgoing_;
  std::unordered_map<NodeId, std::size_t> degree_;
  double max_speed_ = 0.0;
};

/// Closest point on a polyline: arc offset of the foot point and the
/// (non-negative) distance to it.
struct PolylineProjection {
  double offset = 0.0;
  double distance = 0.0;
  Vec2 foot;
  std::size_t piece = 0;
};

PolylineProjection project_to_polyline(Vec2 point, std::span<const Vec2> line);

/// Point at arc offset `s` along a polyline (clamped to its ends).
Vec2 point_at_offset(std::span<const Vec2> line, double s);

/// Nearest segment to `point` by perpendicular distance; ties go to the
/// lowest segment id. Throws Error(configuration) on an empty network.
SegmentProjection project_to_segment(Vec2 point, const RoadNetwork& network);

/// Same as above restricted to `candidates`; ties go to the candidate that
/// appears first.
SegmentProjection project_to_segment(Vec2 point, const RoadNetwork& network,
                                     std::span<const SegmentId> candidates);

}  // namespace smdt::road

#endif  // SMDT_ROAD_ROAD_NETWORK_HPP_
