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

#ifndef SMDT_WORLD_EVENT_QUEUE_HPP_
#define SMDT_WORLD_EVENT_QUEUE_HPP_

#include <functional>
#include <queue>
#include <vector>

#include "smdt/common.hpp"

namespace smdt::world {

/// Ordering class for events that share a timestamp. Lower runs first, so
/// the world state is advanced before anything samples it.
enum class EventKind : std::uint8_t {
  world_tick = 0,
  delivery = 1,
  rsu_frame = 2,
  raw_upload = 3,
  cloud_sync = 4,
  cloud_work = 5,
  vehicle = 6,
  timeout = 7,
  control = 8,
};

/// Single-threaded virtual-time scheduler. Events fire in (time, kind,
/// source, insertion) order, which makes a run a pure function of its
/// inputs.
class EventQueue {
 public:
  using Handler = std::function<void()>;

  /// Throws Error(fault) if `at` lies before the current time.
  void schedule(SimTime at, EventKind kind, std::uint32_t source, Handler handler);

  /// Runs every event with time <= `end`; leaves now() at `end`.
  void run_until(SimTime end);
  /// Pops and runs one event. Returns false when the queue is empty.
  bool step();

  SimTime now() const { return now_; }
  bool empty() const { return queue_.empty(); }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t executed() const { return executed_; }

 private:
  struct Entry {
    SimTime time;
    EventKind kind;
    std::uint32_t source;
    std::uint64_t seq;
    Handler handler;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const;
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  SimTime now_{0};
  std::uint64_t next_seq_ = 0;
  std::uint64_t executed_ = 0;
};

}  // namespace smdt::world

#endif  // SMDT_WORLD_EVENT_QUEUE_HPP_
