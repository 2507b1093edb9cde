/*
 * Copyright 2026 The odflow Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "odflow/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "odflow/error.hpp"

namespace odflow::csv {

Reader::Reader(std::istream& in, std::string source)
    : in_(in), source_(std::move(source)) {}

void Reader::fail(const std::string& what) const {
  throw Error(ErrorCode::kParse,
              source_ + ":" + std::to_string(line_) + ": " + what);
}

bool Reader::read_record(std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  while (true) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }

  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      if (!field.empty() || was_quoted) fail("unexpected quote");
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      if (was_quoted) fail("text after closing quote");
      field.push_back(c);
    }
  }
  if (quoted) fail("unterminated quote");
  fields.push_back(std::move(field));
  return true;
}

const std::vector<std::string>& Reader::read_header() {
  if (!read_record(header_)) fail("missing header");
  return header_;
}

void Reader::expect_header(std::span<const std::string_view> expected) {
  const auto& got = read_header();
  bool same = got.size() == expected.size();
  for (std::size_t i = 0; same && i < got.size(); ++i) {
    same = got[i] == expected[i];
  }
  if (!same) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ',';
      want += expected[i];
    }
    fail("expected header '" + want + "'");
  }
}

bool Reader::next(std::vector<std::string>& fields) {
  if (!read_record(fields)) return false;
  if (fields.size() != header_.size()) {
    fail("expected " + std::to_string(header_.size()) + " fields, got " +
         std::to_string(fields.size()));
  }
  return true;
}

std::optional<std::int64_t> parse_int(std::string_view field) {
  std::int64_t value = 0;
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), last, value);
  if (field.empty() || ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view field) {
  double value = 0.0;
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), last, value);
  if (field.empty() || ec != std::errc() || ptr != last ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::int64_t Reader::to_int(const std::string& field,
                            std::string_view column) const {
  const auto v = parse_int(field);
  if (!v) {
    fail("column '" + std::string(column) + "': not an integer: '" + field +
         "'");
  }
  return *v;
}

double Reader::to_double(const std::string& field,
                         std::string_view column) const {
  const auto v = parse_double(field);
  if (!v) {
    fail("column '" + std::string(column) + "': not a finite number: '" +
         field + "'");
  }
  return *v;
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace odflow::csv
