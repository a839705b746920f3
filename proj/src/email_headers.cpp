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

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "sophgrade/corpus.hpp"
#include "sophgrade/error.hpp"

namespace sophgrade {
namespace {

bool is_wsp(char c) { return c == ' ' || c == '\t'; }

std::string_view trim_wsp(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool valid_field_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 33 && u <= 126 && c != ':';
  });
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string strip_comments(std::string_view s) {
  std::string out;
  int depth = 0;
  for (char c : s) {
    if (c == '(') {
      ++depth;
    } else if (c == ')' && depth > 0) {
      --depth;
      out.push_back(' ');
    } else if (depth == 0) {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
      if (c == ',') out.emplace_back(",");
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<int> to_int(std::string_view s) {
  if (s.empty() || s.size() > 4) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::optional<int> zone_offset(std::string_view z) {
  if (z.size() == 5 && (z[0] == '+' || z[0] == '-')) {
    const auto hh = to_int(z.substr(1, 2));
    const auto mm = to_int(z.substr(3, 2));
    if (!hh || !mm || *mm > 59) return std::nullopt;
    const int minutes = *hh * 60 + *mm;
    return z[0] == '-' ? -minutes : minutes;
  }
  struct Named { const char* name; int hours; };
  static constexpr Named kZones[] = {
      {"UT", 0},   {"GMT", 0},  {"Z", 0},    {"EST", -5}, {"EDT", -4},
      {"CST", -6}, {"CDT", -5}, {"MST", -7}, {"MDT", -6}, {"PST", -8},
      {"PDT", -7}};
  for (const auto& zone : kZones) {
    if (iequals(z, zone.name)) return zone.hours * 60;
  }
  return std::nullopt;
}

}  // namespace

std::optional<HeaderDateTime> parse_rfc5322_date(std::string_view text) {
  static constexpr const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr",
                                            "May", "Jun", "Jul", "Aug",
                                            "Sep", "Oct", "Nov", "Dec"};
  auto tokens = split_tokens(strip_comments(text));
  std::size_t i = 0;
  // Optional "Day ,"
  if (i < tokens.size() && !tokens[i].empty() &&
      std::isalpha(static_cast<unsigned char>(tokens[i][0]))) {
    ++i;
    if (i < tokens.size() && tokens[i] == ",") ++i;
  }
  if (tokens.size() < i + 4) return std::nullopt;

  const auto day = to_int(tokens[i]);
  int month = 0;
  for (int m = 0; m < 12; ++m) {
    if (iequals(tokens[i + 1], kMonths[m])) month = m + 1;
  }
  auto year = to_int(tokens[i + 2]);
  if (!day || month == 0 || !year) return std::nullopt;
  if (tokens[i + 2].size() == 2) *year += *year < 50 ? 2000 : 1900;
  else if (tokens[i + 2].size() == 3) *year += 1900;

  // hh:mm[:ss]
  const std::string& clock = tokens[i + 3];
  std::vector<int> parts;
  std::size_t start = 0;
  while (start <= clock.size()) {
    const std::size_t colon = clock.find(':', start);
    const auto v = to_int(std::string_view(clock).substr(
        start, colon == std::string::npos ? std::string::npos : colon - start));
    if (!v) return std::nullopt;
    parts.push_back(*v);
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) return std::nullopt;

  HeaderDateTime out;
  out.date = Date{std::chrono::year(*year), std::chrono::month(month),
                  std::chrono::day(*day)};
  if (!out.date.ok()) return std::nullopt;
  out.hour = parts[0];
  out.minute = parts[1];
  out.second = parts.size() == 3 ? parts[2] : 0;
  if (out.hour > 23 || out.minute > 59 || out.second > 60) return std::nullopt;

  if (tokens.size() > i + 4) {
    const auto offset = zone_offset(tokens[i + 4]);
    if (!offset) return std::nullopt;
    out.utc_offset_minutes = *offset;
  }
  return out;
}

EmailHeaderSummary parse_email_headers(std::string_view raw) {
  EmailHeaderSummary summary;
  struct Field {
    std::string name;
    std::string value;
    std::size_t line;
  };
  std::vector<Field> fields;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < raw.size()) {
    std::size_t eol = raw.find('\n', pos);
    std::string_view line = raw.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? raw.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) break;  // end of header block

    if (is_wsp(line.front())) {
      if (fields.empty()) {
        summary.parse_warnings.push_back(
            "line " + std::to_string(line_no) +
            ": continuation line without a preceding header");
      } else {
        fields.back().value += line;
      }
      continue;
    }
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos ||
        !valid_field_name(line.substr(0, colon))) {
      summary.parse_warnings.push_back("line " + std::to_string(line_no) +
                                       ": not a 'Name: value' header line");
      continue;
    }
    fields.push_back(Field{std::string(line.substr(0, colon)),
                           std::string(line.substr(colon + 1)), line_no});
  }

  if (fields.empty()) throw Error(ErrorCode::kParse, "no headers found");

  for (const auto& f : fields) {
    std::optional<std::string>* slot = nullptr;
    if (iequals(f.name, "From")) slot = &summary.from;
    else if (iequals(f.name, "To")) slot = &summary.to;
    else if (iequals(f.name, "Subject")) slot = &summary.subject;

    const std::string value(trim_wsp(f.value));
    if (slot != nullptr) {
      if (slot->has_value()) {
        summary.parse_warnings.push_back("line " + std::to_string(f.line) +
                                         ": repeated " + f.name +
                                         " header ignored");
      } else {
        *slot = value;
      }
    } else if (iequals(f.name, "Date")) {
      if (summary.date) {
        summary.parse_warnings.push_back("line " + std::to_string(f.line) +
                                         ": repeated Date header ignored");
      } else if (auto dt = parse_rfc5322_date(value)) {
        summary.date = *dt;
      } else {
        summary.parse_warnings.push_back("line " + std::to_string(f.line) +
                                         ": unparseable Date '" + value + "'");
      }
    }
  }
  return summary;
}

EmailHeaderSummary parse_email_headers(std::span<const std::byte> raw) {
  return parse_email_headers(std::string_view(
      reinterpret_cast<const char*>(raw.data()), raw.size()));
}

}  // namespace sophgrade
