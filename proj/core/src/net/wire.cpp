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

#include "smdt/net/wire.hpp"

#include <bit>
#include <limits>
#include <optional>

namespace smdt::net {

namespace {

class Writer {
 public:
  explicit Writer(std::size_t reserve) { buf_.reserve(reserve); }

  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void str16(const std::string& s) {
    u16(static_cast<std::uint16_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }

  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  bool has(std::size_t n) const { return b_.size() - pos_ >= n; }
  std::size_t remaining() const { return b_.size() - pos_; }

  std::uint8_t u8() { return b_[pos_++]; }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  std::span<const std::uint8_t> take(std::size_t n) {
    auto out = b_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::uint64_t le(int n) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

void require_fits(std::size_t n, std::size_t max, const char* what) {
  if (n > max) throw Error(Errc::protocol, std::string(what) + " exceeds its length field");
}

struct SizeOf {
  std::size_t operator()(const TrackingPayload& p) const {
    require_fits(p.objects.size(), std::numeric_limits<std::uint16_t>::max(), "track count");
    return 2 + kTrackRecordSize * p.objects.size();
  }
  std::size_t operator()(const RawChunkPayload& p) const {
    require_fits(p.data.size(), std::numeric_limits<std::uint32_t>::max(), "raw chunk");
    return 8 + p.data.size();
  }
  std::size_t operator()(const RouteRequestPayload& p) const {
    require_fits(p.url.size(), std::numeric_limits<std::uint16_t>::max(), "url");
    return 12 + 2 + p.url.size();
  }
  std::size_t operator()(const RouteResponsePayload& p) const {
    require_fits(p.url.size(), std::numeric_limits<std::uint16_t>::max(), "url");
    return 1 + 2 + p.url.size();
  }
  std::size_t operator()(const RouteFilePayload& p) const {
    require_fits(p.waypoints.size(), std::numeric_limits<std::uint32_t>::max(), "waypoint count");
    return 4 + kWireWaypointSize * p.waypoints.size();
  }
  std::size_t operator()(const VehicleStatePayload&) const { return 16; }
};

struct Encoder {
  Writer& w;
  void operator()(const TrackingPayload& p) const {
    w.u16(static_cast<std::uint16_t>(p.objects.size()));
    for (const TrackRecord& r : p.objects) {
      w.u32(r.id);
      w.u8(static_cast<std::uint8_t>(r.object_class));
      for (float f : {r.x, r.y, r.z, r.vx, r.vy, r.length, r.width, r.height, r.yaw}) w.f32(f);
    }
  }
  void operator()(const RawChunkPayload& p) const {
    w.u32(p.chunk_index);
    w.u32(static_cast<std::uint32_t>(p.data.size()));
    w.bytes(p.data);
  }
  void operator()(const RouteRequestPayload& p) const {
    w.f32(p.x);
    w.f32(p.y);
    w.u32(p.destination);
    w.str16(p.url);
  }
  void operator()(const RouteResponsePayload& p) const {
    w.u8(static_cast<std::uint8_t>(p.status));
    w.str16(p.url);
  }
  void operator()(const RouteFilePayload& p) const {
    w.u32(static_cast<std::uint32_t>(p.waypoints.size()));
    for (const WireWaypoint& wp : p.waypoints) {
      for (float f : {wp.x, wp.y, wp.z, wp.yaw, wp.velocity}) w.f32(f);
    }
  }
  void operator()(const VehicleStatePayload& p) const {
    for (float f : {p.x, p.y, p.yaw, p.speed}) w.f32(f);
  }
};

DecodeError fail(DecodeError::Reason r, std::string detail) { return {r, std::move(detail)}; }

std::optional<std::string> read_str16(Reader& r) {
  if (!r.has(2)) return std::nullopt;
  const std::uint16_t n = r.u16();
  if (!r.has(n)) return std::nullopt;
  auto b = r.take(n);
  return std::string(b.begin(), b.end());
}

}  // namespace

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::tracking: return "tracking";
    case MsgType::raw_chunk: return "raw_chunk";
    case MsgType::route_request: return "route_request";
    case MsgType::route_response: return "route_response";
    case MsgType::route_file: return "route_file";
    case MsgType::vehicle_state: return "vehicle_state";
  }
  return "unknown";
}

const char* to_string(DecodeError::Reason r) {
  using R = DecodeError::Reason;
  switch (r) {
    case R::truncated: return "truncated";
    case R::bad_magic: return "bad_magic";
    case R::bad_version: return "bad_version";
    case R::bad_type: return "bad_type";
    case R::bad_flags: return "bad_flags";
    case R::bad_field: return "bad_field";
    case R::trailing_bytes: return "trailing_bytes";
  }
  return "unknown";
}

MsgType Message::type() const {
  // Variant alternatives are declared in wire-type order.
  return static_cast<MsgType>(payload.index() + 1);
}

std::size_t encoded_size(const Message& msg) {
  return kHeaderSize + std::visit(SizeOf{}, msg.payload);
}

std::vector<std::uint8_t> encode(const Message& msg) {
  Writer w(encoded_size(msg));
  w.u16(kMagic);
  w.u8(kVersion);
  w.u8(static_cast<std::uint8_t>(msg.type()));
  w.u16(msg.source_id);
  w.u16(0);
  w.u32(msg.seq);
  w.u64(msg.timestamp_us);
  std::visit(Encoder{w}, msg.payload);
  return w.take();
}

DecodeResult decode(std::span<const std::uint8_t> bytes) {
  using R = DecodeError::Reason;
  Reader r(bytes);
  if (!r.has(kHeaderSize)) return fail(R::truncated, "header");
  if (r.u16() != kMagic) return fail(R::bad_magic, "magic");
  if (r.u8() != kVersion) return fail(R::bad_version, "version");
  const std::uint8_t type = r.u8();
  Message m;
  m.source_id = r.u16();
  if (r.u16() != 0) return fail(R::bad_flags, "reserved flags set");
  m.seq = r.u32();
  m.timestamp_us = r.u64();

  switch (static_cast<MsgType>(type)) {
    case MsgType::tracking: {
      if (!r.has(2)) return fail(R::truncated, "track count");
      const std::uint16_t n = r.u16();
      if (r.remaining() < kTrackRecordSize * n) return fail(R::truncated, "track records");
      TrackingPayload p;
      p.objects.reserve(n);
      for (std::uint16_t i = 0; i < n; ++i) {
        TrackRecord t;
        t.id = r.u32();
        const std::uint8_t cls = r.u8();
        if (cls > static_cast<std::uint8_t>(world::ActorClass::other)) {
          return fail(R::bad_field, "object class");
        }
        t.object_class = static_cast<world::ActorClass>(cls);
        for (float* f : {&t.x, &t.y, &t.z, &t.vx, &t.vy, &t.length, &t.width, &t.height, &t.yaw}) {
          *f = r.f32();
        }
        p.objects.push_back(t);
      }
      m.payload = std::move(p);
      break;
    }
    case MsgType::raw_chunk: {
      if (!r.has(8)) return fail(R::truncated, "raw chunk header");
      RawChunkPayload p;
      p.chunk_index = r.u32();
      const std::uint32_t n = r.u32();
      if (!r.has(n)) return fail(R::truncated, "raw chunk data");
      auto b = r.take(n);
      p.data.assign(b.begin(), b.end());
      m.payload = std::move(p);
      break;
    }
    case MsgType::route_request: {
      if (!r.has(12)) return fail(R::truncated, "route request");
      RouteRequestPayload p;
      p.x = r.f32();
      p.y = r.f32();
      p.destination = r.u32();
      auto url = read_str16(r);
      if (!url) return fail(R::truncated, "url");
      p.url = std::move(*url);
      m.payload = std::move(p);
      break;
    }
    case MsgType::route_response: {
      if (!r.has(1)) return fail(R::truncated, "status");
      const std::uint8_t status = r.u8();
      if (status > static_cast<std::uint8_t>(RouteStatus::not_found)) {
        return fail(R::bad_field, "route status");
      }
      auto url = read_str16(r);
      if (!url) return fail(R::truncated, "url");
      m.payload = RouteResponsePayload{static_cast<RouteStatus>(status), std::move(*url)};
      break;
    }
    case MsgType::route_file: {
      if (!r.has(4)) return fail(R::truncated, "waypoint count");
      const std::uint32_t n = r.u32();
      if (r.remaining() / kWireWaypointSize < n) return fail(R::truncated, "waypoints");
      RouteFilePayload p;
      p.waypoints.reserve(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        WireWaypoint wp;
        for (float* f : {&wp.x, &wp.y, &wp.z, &wp.yaw, &wp.velocity}) *f = r.f32();
        p.waypoints.push_back(wp);
      }
      m.payload = std::move(p);
      break;
    }
    case MsgType::vehicle_state: {
      if (!r.has(16)) return fail(R::truncated, "vehicle state");
      VehicleStatePayload p;
      for (float* f : {&p.x, &p.y, &p.yaw, &p.speed}) *f = r.f32();
      m.payload = p;
      break;
    }
    default:
      return fail(R::bad_type, "msg_type " + std::to_string(type));
  }
  if (r.remaining() != 0) return fail(R::trailing_bytes, std::to_string(r.remaining()) + " bytes");
  return m;
}

}  // namespace smdt::net
