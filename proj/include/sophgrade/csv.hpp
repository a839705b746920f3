// Copyright 2026 The sophgrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOPHGRADE_CSV_HPP_
#define SOPHGRADE_CSV_HPP_

// Minimal RFC 4180 reader/writer: comma separated, optional double-quoted
// fields with "" escapes, CRLF or LF line endings.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sophgrade::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// Throws Error(kParse) on an unterminated quoted field. Blank lines are
// skipped. A leading UTF-8 byte-order mark is ignored.
std::vector<Row> parse(std::string_view text);

// Maps header names to column positions; lookups by name.
class Header {
 public:
  explicit Header(const Row& row);

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws Error(kSchema) naming the missing column.
  std::size_t require(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

}  // namespace sophgrade::csv

#endif  // SOPHGRADE_CSV_HPP_
