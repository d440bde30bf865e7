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

#include "smdt/world/event_queue.hpp"

#include <string>
#include <tuple>

namespace smdt::world {

bool EventQueue::Later::operator()(const Entry& a, const Entry& b) const {
  return std::tie(a.time, a.kind, a.source, a.seq) > std::tie(b.time, b.kind, b.source, b.seq);
}

void EventQueue::schedule(SimTime at, EventKind kind, std::uint32_t source, Handler handler) {
  if (at < now_) {
    throw Error(Errc::fault, "event scheduled in the past at " + std::to_string(at.us) +
                                 " us (now " + std::to_string(now_.us) + " us)");
  }
  queue_.push(Entry{at, kind, source, next_seq_++, std::move(handler)});
}

bool EventQueue::step() {
  if (queue_.empty()) return false;
  Entry e = queue_.top();
  queue_.pop();
  now_ = e.time;
  ++executed_;
  e.handler();
  return true;
}

void EventQueue::run_until(SimTime end) {
  while (!queue_.empty() && queue_.top().time <= end) step();
  if (now_ < end) now_ = end;
}

}  // namespace smdt::world
