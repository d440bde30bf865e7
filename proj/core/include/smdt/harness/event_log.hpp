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

#ifndef SMDT_HARNESS_EVENT_LOG_HPP_
#define SMDT_HARNESS_EVENT_LOG_HPP_

#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smdt/common.hpp"

namespace smdt::harness {

using Field = std::pair<std::string, std::string>;

struct Record {
  Micros time_us = 0;
  std::string component;
  std::string event;
  std::vector<Field> fields;

  std::optional<std::string_view> get(std::string_view key) const;
  /// Numeric field; throws Error(validation) when missing or malformed.
  double number(std::string_view key) const;
  std::int64_t integer(std::string_view key) const;
  bool operator==(const Record&) const = default;
};

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Time-ordered run log. One record per line:
///   time_us<TAB>component<TAB>event[<TAB>key=value]...
/// Keys and values must not contain tabs, newlines or '='.
class EventLog {
 public:
  /// Throws Error(fault) when `time` precedes the last record.
  void append(SimTime time, std::string component, std::string event,
              std::vector<Field> fields = {});

  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// FNV-1a 64 over the serialised log.
  std::uint64_t digest() const;
  std::string digest_hex() const;

  void write(std::ostream& out) const;
  std::string to_text() const;
  /// Throws Error(io) on malformed lines.
  static EventLog read(std::istream& in);

 private:
  std::vector<Record> records_;
};

std::string format_record(const Record& r);

}  // namespace smdt::harness

#endif  // SMDT_HARNESS_EVENT_LOG_HPP_
