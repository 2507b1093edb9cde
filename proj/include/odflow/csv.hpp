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

#ifndef ODFLOW_CSV_HPP_
#define ODFLOW_CSV_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace odflow::csv {

// Minimal RFC 4180 reader: comma separated, optional double quotes, LF line
// endings (a trailing CR is tolerated). Blank lines are skipped. Every error
// is reported as a parse error carrying the source name and line number.
class Reader {
 public:
  Reader(std::istream& in, std::string source);

  // Reads the header row. Must be called once before next().
  const std::vector<std::string>& read_header();

  // Throws unless the header equals `expected` exactly.
  void expect_header(std::span<const std::string_view> expected);

  // Fills `fields` with the next record. Returns false at end of input.
  // Records whose width differs from the header are rejected.
  bool next(std::vector<std::string>& fields);

  std::size_t line() const { return line_; }
  const std::string& source() const { return source_; }

  [[noreturn]] void fail(const std::string& what) const;

  std::int64_t to_int(const std::string& field, std::string_view column) const;
  double to_double(const std::string& field, std::string_view column) const;

 private:
  bool read_record(std::vector<std::string>& fields);

  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::size_t line_ = 0;
};

// Whole-field numeric parsing; nullopt on junk, overflow or non-finite.
std::optional<std::int64_t> parse_int(std::string_view field);
std::optional<double> parse_double(std::string_view field);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

// Quotes a field only when it contains a comma, quote or newline.
std::string escape_field(std::string_view field);

}  // namespace odflow::csv

#endif  // ODFLOW_CSV_HPP_
