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

#include "sophgrade/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>

#include "json.hpp"
#include "sophgrade/csv.hpp"
#include "sophgrade/error.hpp"

namespace sophgrade {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<int> parse_digits(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::optional<bool> parse_bool(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s == "true" || s == "1" || s == "yes" || s == "y") return true;
  if (s == "false" || s == "0" || s == "no" || s == "n" || s.empty()) {
    return false;
  }
  return std::nullopt;
}

int current_year() {
  const auto today = std::chrono::floor<std::chrono::days>(
      std::chrono::system_clock::now());
  return static_cast<int>(std::chrono::year_month_day(today).year());
}

}  // namespace

std::string_view email_type_name(EmailType type) {
  switch (type) {
    case EmailType::kPhishing: return "Phishing";
    case EmailType::kScam: return "Scam";
    case EmailType::kSpam: return "Spam";
  }
  return "?";
}

std::optional<EmailType> parse_email_type(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s == "phishing") return EmailType::kPhishing;
  if (s == "scam") return EmailType::kScam;
  if (s == "spam") return EmailType::kSpam;
  return std::nullopt;
}

std::optional<Date> parse_iso_date(std::string_view text) {
  text = trim(text);
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  const auto y = parse_digits(text.substr(0, 4));
  const auto m = parse_digits(text.substr(5, 2));
  const auto d = parse_digits(text.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const Date date{std::chrono::year(*y), std::chrono::month(*m),
                  std::chrono::day(*d)};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_iso_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()));
  return buf;
}

void CorpusIndex::add(EmailRecord record) {
  const auto type = record.email_type;
  std::string id = record.email_id;
  auto [it, inserted] = emails_.emplace(id, std::move(record));
  if (!inserted) {
    throw Error(ErrorCode::kDuplicate, "duplicate email_id '" + id + "'");
  }
  ++counts_[static_cast<std::size_t>(type)];
}

const EmailRecord* CorpusIndex::find(std::string_view email_id) const {
  auto it = emails_.find(email_id);
  return it == emails_.end() ? nullptr : &it->second;
}

double CorpusIndex::percentage(EmailType type) const {
  if (emails_.empty()) return 0.0;
  return 100.0 * static_cast<double>(count(type)) /
         static_cast<double>(emails_.size());
}

namespace {

// Field accessor abstracting over CSV rows and JSON objects.
using FieldGetter = std::function<std::optional<std::string>(const char*)>;

EmailRecord build_record(const FieldGetter& get, const std::string& where,
                         int max_year) {
  auto fail = [&](ErrorCode code, const std::string& what) -> void {
    throw Error(code, where + ": " + what);
  };
  EmailRecord r;
  r.email_id = std::string(trim(get("email_id").value_or("")));
  if (r.email_id.empty()) fail(ErrorCode::kSchema, "email_id is empty");
  r.external_id = get("external_id").value_or("");

  const std::string type_text = get("email_type").value_or("");
  const auto type = parse_email_type(type_text);
  if (!type) {
    fail(ErrorCode::kSchema, "unknown email_type '" + type_text +
                                 "' (expected Phishing, Scam or Spam)");
  }
  r.email_type = *type;

  const std::string date_text = get("date").value_or("");
  const auto date = parse_iso_date(date_text);
  if (!date) fail(ErrorCode::kParse, "unparseable date '" + date_text + "'");
  const int year = static_cast<int>(date->year());
  if (year < 1990 || year > max_year) {
    fail(ErrorCode::kSchema, "date '" + date_text + "' outside [1990, " +
                                 std::to_string(max_year) + "]");
  }
  r.date = *date;

  r.subject = get("subject").value_or("");
  r.sender = get("sender").value_or("");
  r.screenshot_ref = std::string(trim(get("screenshot_ref").value_or("")));
  for (auto [key, out] : {std::pair{"sanitized", &r.sanitized},
                          {"reconstructed", &r.reconstructed}}) {
    const std::string text = get(key).value_or("");
    const auto b = parse_bool(text);
    if (!b) fail(ErrorCode::kSchema, std::string(key) + ": expected boolean, got '" + text + "'");
    *out = *b;
  }
  return r;
}

CorpusIndex ingest_csv(std::string_view text, int max_year) {
  const auto rows = csv::parse(text);
  CorpusIndex index;
  if (rows.empty()) return index;
  const csv::Header header(rows.front());
  const char* required[] = {"email_id", "email_type", "date"};
  for (const char* name : required) header.require(name);

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "manifest line " + std::to_string(row.line);
    FieldGetter get = [&](const char* name) -> std::optional<std::string> {
      const auto col = header.find(name);
      if (!col || *col >= row.fields.size()) return std::nullopt;
      return row.fields[*col];
    };
    EmailRecord record = build_record(get, where, max_year);
    try {
      index.add(std::move(record));
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
  }
  return index;
}

CorpusIndex ingest_json(std::string_view text, int max_year) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("manifest: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kSchema, "manifest: expected array");
  CorpusIndex index;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "manifest[" + std::to_string(i) + "]";
    const json& obj = doc[i];
    if (!obj.is_object()) throw Error(ErrorCode::kSchema, where + ": expected object");
    FieldGetter get = [&](const char* name) -> std::optional<std::string> {
      auto it = obj.find(name);
      if (it == obj.end() || it->is_null()) return std::nullopt;
      if (it->is_string()) return it->get<std::string>();
      if (it->is_boolean()) return it->get<bool>() ? "true" : "false";
      return it->dump();
    };
    EmailRecord record = build_record(get, where, max_year);
    try {
      index.add(std::move(record));
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
  }
  return index;
}

}  // namespace

CorpusIndex ingest_manifest(std::string_view text, std::optional<int> max_year) {
  const int limit = max_year.value_or(current_year());
  const std::string_view head = trim(text);
  if (!head.empty() && head.front() == '[') return ingest_json(text, limit);
  return ingest_csv(text, limit);
}

std::string serialize_corpus(const CorpusIndex& index) {
  json list = json::array();
  for (const auto& [id, r] : index.emails()) {
    list.push_back({{"email_id", r.email_id},
                    {"external_id", r.external_id},
                    {"email_type", email_type_name(r.email_type)},
                    {"date", format_iso_date(r.date)},
                    {"subject", r.subject},
                    {"sender", r.sender},
                    {"screenshot_ref", r.screenshot_ref},
                    {"sanitized", r.sanitized},
                    {"reconstructed", r.reconstructed}});
  }
  return list.dump(2) + "\n";
}

ValidationReport validate_corpus(
    const CorpusIndex& index,
    const std::optional<std::filesystem::path>& image_root) {
  ValidationReport report;
  for (const auto& [id, r] : index.emails()) {
    bool missing = r.screenshot_ref.empty();
    if (!missing && image_root) {
      std::error_code ec;
      missing = !std::filesystem::is_regular_file(*image_root / r.screenshot_ref, ec);
    }
    if (missing) report.missing_screenshots.push_back(id);
    if (r.reconstructed && !r.sanitized) {
      report.reconstructed_unsanitized.push_back(id);
    }
    ++report.year_histogram[r.year()];
    ++report.counts_by_type[static_cast<std::size_t>(r.email_type)];
  }
  return report;
}

std::string validation_report_json(const ValidationReport& report) {
  json doc;
  doc["missing_screenshots"] = report.missing_screenshots;
  doc["reconstructed_unsanitized"] = report.reconstructed_unsanitized;
  json years = json::object();
  for (const auto& [year, n] : report.year_histogram) {
    years[std::to_string(year)] = n;
  }
  doc["year_histogram"] = std::move(years);
  json types = json::object();
  for (EmailType t : kEmailTypes) {
    types[std::string(email_type_name(t))] =
        report.counts_by_type[static_cast<std::size_t>(t)];
  }
  doc["counts_by_type"] = std::move(types);
  doc["clean"] = report.clean();
  return doc.dump(2) + "\n";
}

}  // namespace sophgrade
