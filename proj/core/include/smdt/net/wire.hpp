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

#ifndef SMDT_NET_WIRE_HPP_
#define SMDT_NET_WIRE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "smdt/common.hpp"
#include "smdt/world/actors.hpp"

namespace smdt::net {

// Header layout (little-endian, 20 bytes):
//   0  u16 magic 0x4454 ("DT")
//   2  u8  version (1)
//   3  u8  msg_type
//   4  u16 source_id
//   6  u16 flags (reserved, must be zero)
//   8  u32 seq
//  12  u64 timestamp_us
// Payloads are self-delimiting; a buffer decodes only if its length equals
// the size the payload declares.

inline constexpr std::uint16_t kMagic = 0x4454;
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 20;
inline constexpr std::size_t kTrackRecordSize = 41;
inline constexpr std::size_t kWireWaypointSize = 20;

enum class MsgType : std::uint8_t {
  tracking = 1,
  raw_chunk = 2,
  route_request = 3,
  route_response = 4,
  route_file = 5,
  vehicle_state = 6,
};

const char* to_string(MsgType t);

struct TrackRecord {
  std::uint32_t id = 0;
  world::ActorClass object_class = world::ActorClass::other;
  float x = 0, y = 0, z = 0;
  float vx = 0, vy = 0;
  float length = 0, width = 0, height = 0;
  float yaw = 0;

  bool operator==(const TrackRecord&) const = default;
};

struct TrackingPayload {
  std::vector<TrackRecord> objects;
  bool operator==(const TrackingPayload&) const = default;
};

/// Raw sensor data block: chunk_index u32, length u32, then `length` bytes.
struct RawChunkPayload {
  std::uint32_t chunk_index = 0;
  std::vector<std::uint8_t> data;
  bool operator==(const RawChunkPayload&) const = default;
};

/// A planning request carries an empty `url`; a download request names the
/// URL returned by an earlier response.
struct RouteRequestPayload {
  float x = 0, y = 0;
  std::uint32_t destination = 0;
  std::string url;
  bool operator==(const RouteRequestPayload&) const = default;
};

enum class RouteStatus : std::uint8_t { ok = 0, no_route = 1, not_found = 2 };

struct RouteResponsePayload {
  RouteStatus status = RouteStatus::ok;
  std::string url;
  bool operator==(const RouteResponsePayload&) const = default;
};

struct WireWaypoint {
  float x = 0, y = 0, z = 0, yaw = 0, velocity = 0;
  bool operator==(const WireWaypoint&) const = default;
};

struct RouteFilePayload {
  std::vector<WireWaypoint> waypoints;
  bool operator==(const RouteFilePayload&) const = default;
};

/// Vehicle position and motion state uploaded over V2C.
struct VehicleStatePayload {
  float x = 0, y = 0, yaw = 0, speed = 0;
  bool operator==(const VehicleStatePayload&) const = default;
};

using Payload = std::variant<TrackingPayload, RawChunkPayload, RouteRequestPayload,
                             RouteResponsePayload, RouteFilePayload, VehicleStatePayload>;

struct Message {
  std::uint16_t source_id = 0;
  std::uint32_t seq = 0;
  std::uint64_t timestamp_us = 0;
  Payload payload;

  MsgType type() const;
  bool operator==(const Message&) const = default;
};

struct DecodeError {
  enum class Reason { truncated, bad_magic, bad_version, bad_type, bad_flags, bad_field, trailing_bytes };
  Reason reason;
  std::string detail;
};

const char* to_string(DecodeError::Reason r);

using DecodeResult = std::variant<Message, DecodeError>;

/// Exact encoded size. Throws Error(protocol) when a count or string does not
/// fit its length field.
std::size_t encoded_size(const Message& msg);
std::vector<std::uint8_t> encode(const Message& msg);

/// Never throws on malformed input; any defect is reported as DecodeError.
DecodeResult decode(std::span<const std::uint8_t> bytes);

/// Encoded size of a raw chunk of `data_bytes` without materialising it.
constexpr std::size_t raw_chunk_wire_size(std::size_t data_bytes) {
  return kHeaderSize + 8 + data_bytes;
}

/// Encoded size of a tracking frame with `objects` records.
constexpr std::size_t tracking_wire_size(std::size_t objects) {
  return kHeaderSize + 2 + kTrackRecordSize * objects;
}

}  // namespace smdt::net

#endif  // SMDT_NET_WIRE_HPP_
