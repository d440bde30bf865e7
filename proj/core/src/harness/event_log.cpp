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

#include "smdt/harness/event_log.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

namespace smdt::harness {

namespace {

bool clean(std::string_view s, bool allow_eq) {
  for (char c : s) {
    if (c == '\t' || c == '\n' || c == '\r' || (!allow_eq && c == '=')) return false;
  }
  return true;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    parts.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return parts;
}

}  // namespace

std::optional<std::string_view> Record::get(std::string_view key) const {
  for (const Field& f : fields) {
    if (f.first == key) return std::string_view(f.second);
  }
  return std::nullopt;
}

double Record::number(std::string_view key) const {
  const auto v = get(key);
  double out = 0.0;
  if (!v || std::from_chars(v->data(), v->data() + v->size(), out).ec != std::errc{}) {
    throw Error(Errc::validation, event + ": missing numeric field '" + std::string(key) + "'");
  }
  return out;
}

std::int64_t Record::integer(std::string_view key) const {
  const auto v = get(key);
  std::int64_t out = 0;
  if (!v || std::from_chars(v->data(), v->data() + v->size(), out).ec != std::errc{}) {
    throw Error(Errc::validation, event + ": missing integer field '" + std::string(key) + "'");
  }
  return out;
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void EventLog::append(SimTime time, std::string component, std::string event,
                      std::vector<Field> fields) {
  if (!records_.empty() && time.us < records_.back().time_us) {
    throw Error(Errc::fault, "event log records must be time-ordered");
  }
  if (!clean(component, false) || !clean(event, false)) {
    throw Error(Errc::fault, "invalid characters in event name");
  }
  for (const Field& f : fields) {
    if (f.first.empty() || !clean(f.first, false) || !clean(f.second, true)) {
      throw Error(Errc::fault, "invalid event field '" + f.first + "'");
    }
  }
  records_.push_back({time.us, std::move(component), std::move(event), std::move(fields)});
}

std::string format_record(const Record& r) {
  std::string line = std::to_string(r.time_us);
  line += '\t';
  line += r.component;
  line += '\t';
  line += r.event;
  for (const Field& f : r.fields) {
    line += '\t';
    line += f.first;
    line += '=';
    line += f.second;
  }
  return line;
}

std::string EventLog::to_text() const {
  std::string text;
  for (const Record& r : records_) {
    text += format_record(r);
    text += '\n';
  }
  return text;
}

std::uint64_t EventLog::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Record& r : records_) {
    const std::string line = format_record(r);
    for (unsigned char c : line) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= static_cast<unsigned char>('\n');
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string EventLog::digest_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest()));
  return buf;
}

void EventLog::write(std::ostream& out) const {
  out << to_text();
  if (!out) throw Error(Errc::io, "failed to write event log");
}

EventLog EventLog::read(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto parts = split_tabs(line);
    Record r;
    if (parts.size() < 3 ||
        std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), r.time_us).ec !=
            std::errc{}) {
      throw Error(Errc::io, "malformed event log line " + std::to_string(line_no));
    }
    r.component = parts[1];
    r.event = parts[2];
    for (std::size_t i = 3; i < parts.size(); ++i) {
      const std::size_t eq = parts[i].find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw Error(Errc::io, "malformed field on event log line " + std::to_string(line_no));
      }
      r.fields.emplace_back(std::string(parts[i].substr(0, eq)), std::string(parts[i].substr(eq + 1)));
    }
    if (!log.records_.empty() && r.time_us < log.records_.back().time_us) {
      throw Error(Errc::io, "event log is not time-ordered at line " + std::to_string(line_no));
    }
    log.records_.push_back(std::move(r));
  }
  return log;
}

}  // namespace smdt::harness
