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

#include <gtest/gtest.h>

#include "smdt/net/link.hpp"
#include "smdt/net/wire.hpp"

namespace smdt::net {
namespace {

LinkModel plain(double bps, Micros base) {
  LinkModel m;
  m.bandwidth_bps = bps;
  m.base_latency_us = base;
  return m;
}

float rand_float(Rng& rng) { return static_cast<float>(rng.uniform(-1e4, 1e4)); }

std::string rand_string(Rng& rng, std::size_t max_len) {
  std::string s(rng.next() % (max_len + 1), ' ');
  for (char& c : s) c = static_cast<char>(rng.next() % 256);
  return s;
}

Message random_message(Rng& rng) {
  Message m;
  m.source_id = static_cast<std::uint16_t>(rng.next());
  m.seq = static_cast<std::uint32_t>(rng.next());
  m.timestamp_us = rng.next();
  switch (rng.next() % 6) {
    case 0: {
      TrackingPayload p;
      p.objects.resize(rng.next() % 31);
      for (TrackRecord& r : p.objects) {
        r.id = static_cast<std::uint32_t>(rng.next());
        r.object_class = static_cast<world::ActorClass>(rng.next() % 3);
        r.x = rand_float(rng), r.y = rand_float(rng), r.z = rand_float(rng);
        r.vx = rand_float(rng), r.vy = rand_float(rng);
        r.length = rand_float(rng), r.width = rand_float(rng), r.height = rand_float(rng);
        r.yaw = rand_float(rng);
      }
      m.payload = p;
      break;
    }
    case 1: {
      RawChunkPayload p;
      p.chunk_index = static_cast<std::uint32_t>(rng.next());
      p.data.resize(rng.next() % 64);
      for (auto& b : p.data) b = static_cast<std::uint8_t>(rng.next());
      m.payload = p;
      break;
    }
    case 2:
      m.payload = RouteRequestPayload{rand_float(rng), rand_float(rng), static_cast<std::uint32_t>(rng.next()),
                                      rand_string(rng, 40)};
      break;
    case 3:
      m.payload = RouteResponsePayload{static_cast<RouteStatus>(rng.next() % 3), rand_string(rng, 40)};
      break;
    case 4: {
      RouteFilePayload p;
      p.waypoints.resize(rng.next() % 50);
      for (WireWaypoint& w : p.waypoints) {
        w = {rand_float(rng), rand_float(rng), rand_float(rng), rand_float(rng), rand_float(rng)};
      }
      m.payload = p;
      break;
    }
    default:
      m.payload = VehicleStatePayload{rand_float(rng), rand_float(rng), rand_float(rng), rand_float(rng)};
  }
  return m;
}

// ---------------------------------------------------------------------------
// Link model
// ---------------------------------------------------------------------------

TEST(Link, SerialisationPlusBaseLatency) {
  Link link("l", plain(10e6, 1000));
  Rng rng(1);
  const SendResult r = link.send(MsgType::tracking, 1250, SimTime{5000}, 0.0, rng);
  ASSERT_TRUE(r.delivered);
  EXPECT_EQ(r.deliver_at, SimTime{7000});
}

TEST(Link, BackToBackMessagesQueue) {
  Link link("l", plain(10e6, 1000));
  Rng rng(1);
  link.send(MsgType::tracking, 1250, SimTime{0}, 0.0, rng);
  const SendResult second = link.send(MsgType::tracking, 1250, SimTime{0}, 0.0, rng);
  EXPECT_EQ(second.deliver_at, SimTime{3000});
}

TEST(Link, DeliveryIsFifoUnderJitter) {
  LinkModel m = plain(1e9, 1000);
  m.jitter_sigma_us = 500;
  Link link("l", m);
  Rng rng(3);
  SimTime last{0};
  for (int i = 0; i < 5000; ++i) {
    const SendResult r = link.send(MsgType::tracking, 100 + (i % 7) * 300, SimTime{i * 10}, 0.0, rng);
    ASSERT_GE(r.deliver_at, last);
    last = r.deliver_at;
  }
}

TEST(Link, CalibratedLossMatchesBinomialInterval) {
  LinkModel m = plain(1e9, 500);
  m.loss_prob = 0.0047;
  Link link("i2c", m);
  Rng rng(2024);
  for (int i = 0; i < 100000; ++i) link.send(MsgType::tracking, 432, SimTime{i * 100}, 0.0, rng);
  const auto pdr = link.stats().pdr();
  ASSERT_TRUE(pdr);
  EXPECT_GE(*pdr, 0.9938);
  EXPECT_LE(*pdr, 0.9968);
  EXPECT_EQ(link.stats().offered, 100000u);
  EXPECT_EQ(link.stats().delivered + link.stats().dropped, 100000u);
  EXPECT_EQ(link.stream_stats().at(MsgType::tracking).offered, 100000u);
}

TEST(Link, BeyondCoverageDrops) {
  LinkModel m = plain(120e6, 5000);
  m.coverage_m = 100.0;
  Link link("v2c", m);
  Rng rng(1);
  const SendResult r = link.send(MsgType::route_request, 60, SimTime{0}, 150.0, rng);
  EXPECT_FALSE(r.delivered);
  EXPECT_EQ(r.reason, DropReason::out_of_range);
  EXPECT_EQ(link.stats().dropped, 1u);
  EXPECT_EQ(link.stats().dropped_out_of_range, 1u);
}

TEST(Link, OutageWindow) {
  LinkModel m = plain(1e9, 500);
  m.outages = {{SimTime{1000}, SimTime{2000}}};
  Link link("l", m);
  Rng rng(1);
  EXPECT_TRUE(link.send(MsgType::tracking, 22, SimTime{999}, 0.0, rng).delivered);
  const SendResult r = link.send(MsgType::tracking, 22, SimTime{1000}, 0.0, rng);
  EXPECT_FALSE(r.delivered);
  EXPECT_EQ(r.reason, DropReason::unavailable);
  EXPECT_TRUE(link.send(MsgType::tracking, 22, SimTime{2000}, 0.0, rng).delivered);
}

TEST(Link, ModelValidation) {
  LinkModel m = plain(0.0, 1);
  EXPECT_THROW(m.validate(), Error);
  m = plain(1e6, 1);
  m.loss_prob = 1.0;
  EXPECT_THROW(m.validate(), Error);
  EXPECT_GE(LinkModel::ethernet().bandwidth_bps, 1e9);
  EXPECT_GE(LinkModel::wimax().bandwidth_bps, 120e6);
  EXPECT_GE(LinkModel::wimax().coverage_m, 50e3);
}

TEST(LinkStats, PacketDeliveryRatio) {
  LinkStats s;
  EXPECT_FALSE(s.pdr());
  s.offered = 100;
  s.delivered = 100;
  EXPECT_EQ(*s.pdr(), 1.0);
  s.offered = 10000;
  s.delivered = 9953;
  EXPECT_DOUBLE_EQ(*s.pdr(), 0.9953);
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

TEST(Wire, FrameSizes) {
  Message m;
  m.payload = TrackingPayload{};
  EXPECT_EQ(encode(m).size(), 22u);
  EXPECT_EQ(tracking_wire_size(0), 22u);
  m.payload = TrackingPayload{std::vector<TrackRecord>(10)};
  EXPECT_EQ(encode(m).size(), 432u);
  EXPECT_EQ(encoded_size(m), 432u);
  m.payload = RawChunkPayload{0, std::vector<std::uint8_t>(1000)};
  EXPECT_EQ(encode(m).size(), raw_chunk_wire_size(1000));
}

TEST(Wire, HeaderLayoutIsLittleEndian) {
  Message m{0x0102, 0x03040506, 0x0708090A0B0C0D0EULL, VehicleStatePayload{}};
  const auto b = encode(m);
  ASSERT_GE(b.size(), kHeaderSize);
  const std::vector<std::uint8_t> head(b.begin(), b.begin() + kHeaderSize);
  EXPECT_EQ(head, (std::vector<std::uint8_t>{0x54, 0x44, 1, 6, 0x02, 0x01, 0, 0, 0x06, 0x05, 0x04, 0x03,
                                              0x0E, 0x0D, 0x0C, 0x0B, 0x0A, 0x09, 0x08, 0x07}));
}

TEST(Wire, RejectsMalformedHeaders) {
  Message m;
  m.payload = TrackingPayload{};
  auto b = encode(m);
  auto reason = [](std::span<const std::uint8_t> bytes) {
    const auto r = decode(bytes);
    return std::holds_alternative<DecodeError>(r) ? std::get<DecodeError>(r).reason : DecodeError::Reason{-1};
  };
  EXPECT_EQ(reason(std::span(b).first(10)), DecodeError::Reason::truncated);
  auto c = b;
  c[0] = 0;
  EXPECT_EQ(reason(c), DecodeError::Reason::bad_magic);
  c = b;
  c[2] = 9;
  EXPECT_EQ(reason(c), DecodeError::Reason::bad_version);
  c = b;
  c[3] = 77;
  EXPECT_EQ(reason(c), DecodeError::Reason::bad_type);
  c = b;
  c[6] = 1;
  EXPECT_EQ(reason(c), DecodeError::Reason::bad_flags);
  c = b;
  c.push_back(0);
  EXPECT_EQ(reason(c), DecodeError::Reason::trailing_bytes);
}

TEST(Wire, OversizedFieldsThrowOnEncode) {
  Message m;
  m.payload = RouteResponsePayload{RouteStatus::ok, std::string(70000, 'x')};
  try {
    encode(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::protocol);
  }
}

TEST(Wire, RandomRoundTrip) {
  Rng rng(123);
  int failures = 0;
  for (int i = 0; i < 100000; ++i) {
    const Message m = random_message(rng);
    const auto bytes = encode(m);
    if (bytes.size() != encoded_size(m)) ++failures;
    const auto r = decode(bytes);
    if (!std::holds_alternative<Message>(r) || std::get<Message>(r) != m) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

TEST(Wire, FuzzedInputEitherFailsOrReencodesIdentically) {
  Rng rng(99);
  int bad = 0;
  int accepted = 0;
  for (int i = 0; i < 100000; ++i) {
    std::vector<std::uint8_t> bytes;
    if (i % 2 == 0) {
      bytes = encode(random_message(rng));
      const int flips = 1 + static_cast<int>(rng.next() % 3);
      for (int f = 0; f < flips; ++f) bytes[rng.next() % bytes.size()] = static_cast<std::uint8_t>(rng.next());
      if (rng.bernoulli(0.2)) bytes.resize(rng.next() % (bytes.size() + 1));
    } else {
      bytes.resize(rng.next() % 96);
      for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.next());
    }
    const auto r = decode(bytes);
    if (const auto* m = std::get_if<Message>(&r)) {
      ++accepted;
      if (encode(*m) != bytes) ++bad;
    }
  }
  EXPECT_EQ(bad, 0);
  EXPECT_GT(accepted, 0);
}

}  // namespace
}  // namespace smdt::net
