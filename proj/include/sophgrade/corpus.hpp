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

#ifndef SOPHGRADE_CORPUS_HPP_
#define SOPHGRADE_CORPUS_HPP_

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sophgrade {

enum class EmailType { kPhishing, kScam, kSpam };
inline constexpr std::array<EmailType, 3> kEmailTypes = {
    EmailType::kPhishing, EmailType::kScam, EmailType::kSpam};

std::string_view email_type_name(EmailType type);  // "Phishing", ...
// Case-insensitive.
std::optional<EmailType> parse_email_type(std::string_view text);

using Date = std::chrono::year_month_day;

// ISO-8601 calendar date "YYYY-MM-DD"; a trailing time part is ignored.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& date);

struct EmailRecord {
  std::string email_id;
  std::string external_id;
  EmailType email_type = EmailType::kPhishing;
  Date date;
  std::string subject;
  std::string sender;
  std::string screenshot_ref;
  bool sanitized = false;
  bool reconstructed = false;

  int year() const { return static_cast<int>(date.year()); }
  friend bool operator==(const EmailRecord&, const EmailRecord&) = default;
};

class CorpusIndex {
 public:
  CorpusIndex() = default;

  // Throws Error(kDuplicate) when the id is already present.
  void add(EmailRecord record);

  const EmailRecord* find(std::string_view email_id) const;
  // Ordered by email_id.
  const std::map<std::string, EmailRecord, std::less<>>& emails() const {
    return emails_;
  }
  std::size_t size() const { return emails_.size(); }
  std::size_t count(EmailType type) const {
    return counts_[static_cast<std::size_t>(type)];
  }
  // Percentage of the corpus with this type; 0 for an empty corpus.
  double percentage(EmailType type) const;

  friend bool operator==(const CorpusIndex&, const CorpusIndex&) = default;

 private:
  std::map<std::string, EmailRecord, std::less<>> emails_;
  std::array<std::size_t, 3> counts_{};
};

// Manifest with fields email_id, external_id, email_type, date, subject,
// sender, screenshot_ref, sanitized, reconstructed. Accepts CSV with a
// header row, or a JSON array of objects (detected by a leading '[').
// Dates must fall in [1990, max_year]; max_year defaults to the current
// year. Errors name the offending line (CSV) or element (JSON).
CorpusIndex ingest_manifest(std::string_view text,
                            std::optional<int> max_year = std::nullopt);

// JSON array form, loadable again by ingest_manifest.
std::string serialize_corpus(const CorpusIndex& index);

struct ValidationReport {
  std::vector<std::string> missing_screenshots;
  // reconstructed = true but sanitized = false
  std::vector<std::string> reconstructed_unsanitized;
  std::map<int, std::size_t> year_histogram;
  std::array<std::size_t, 3> counts_by_type{};

  bool clean() const {
    return missing_screenshots.empty() && reconstructed_unsanitized.empty();
  }
};

// With an image root, a screenshot_ref naming a file that does not exist
// under it also counts as missing.
ValidationReport validate_corpus(
    const CorpusIndex& index,
    const std::optional<std::filesystem::path>& image_root = std::nullopt);

std::string validation_report_json(const ValidationReport& report);

struct HeaderDateTime {
  Date date;
  int hour = 0;
  int minute = 0;
  int second = 0;
  int utc_offset_minutes = 0;
};

struct EmailHeaderSummary {
  std::optional<std::string> from;
  std::optional<std::string> to;
  std::optional<std::string> subject;
  std::optional<HeaderDateTime> date;
  std::vector<std::string> parse_warnings;
};

// Tolerant internet-message header reader. Unfolds continuation lines,
// stops at the first blank line, ignores unknown fields and reports
// malformed lines as warnings. Throws Error(kParse, "no headers found")
// when not a single "Name: value" line is present.
EmailHeaderSummary parse_email_headers(std::span<const std::byte> raw);
EmailHeaderSummary parse_email_headers(std::string_view raw);

// RFC 5322 date-time ("Mon, 4 Dec 2006 10:00:00 +0000", obsolete zone
// names accepted).
std::optional<HeaderDateTime> parse_rfc5322_date(std::string_view text);

// Seam for an external email-type classifier; no implementation ships.
class EmailTypeClassifier {
 public:
  virtual ~EmailTypeClassifier() = default;
  virtual std::optional<EmailType> classify(const EmailRecord& record,
                                            std::string_view raw_message) = 0;
};

}  // namespace sophgrade

#endif  // SOPHGRADE_CORPUS_HPP_
