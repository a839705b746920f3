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
#include <gtest/gtest.h>

#include <fstream>

#include "sophgrade/corpus.hpp"
#include "sophgrade/error.hpp"
#include "synthetic.hpp"

using namespace sophgrade;
using namespace std::chrono;

namespace {

constexpr const char* kHeader =
    "email_id,external_id,email_type,date,subject,sender,screenshot_ref,sanitized,"
    "reconstructed\n";

Error error_of(std::string_view text, std::optional<int> max_year = 2024) {
  try {
    ingest_manifest(text, max_year);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "accepted: " << text;
  return Error(ErrorCode::kIo, "");
}

}  // namespace

TEST(Corpus, IngestCsv) {
  const auto idx = ingest_manifest(std::string(kHeader) +
                                       "E1,a,phishing,2006-12-04,Hello,x@y,E1.png,true,false\n"
                                       "E2,b,Scam,2021-01-31T10:00:00,,,E2.png,yes,no\n"
                                       "E3,c,SPAM,1999-07-01,,,,0,1\n",
                                   2024);
  ASSERT_EQ(idx.size(), 3u);
  EXPECT_EQ(idx.find("E1")->email_type, EmailType::kPhishing);
  EXPECT_EQ(idx.find("E1")->date, year_month_day(year(2006), month(12), day(4)));
  EXPECT_EQ(idx.find("E2")->year(), 2021);
  EXPECT_TRUE(idx.find("E3")->reconstructed);
  EXPECT_EQ(idx.count(EmailType::kScam), 1u);
  EXPECT_NEAR(idx.percentage(EmailType::kSpam), 100.0 / 3.0, 1e-12);
  EXPECT_EQ(idx.find("missing"), nullptr);
}

TEST(Corpus, SerializeRoundTripsThroughJson) {
  const auto idx = ingest_manifest(std::string(kHeader) +
                                       "E1,a,Phishing,2006-12-04,\"Hi, there\",x@y,E1.png,true,false\n"
                                       "E2,b,Spam,2010-02-03,,,E2.png,false,false\n",
                                   2024);
  const auto again = ingest_manifest(serialize_corpus(idx), 2024);
  EXPECT_EQ(again, idx);
}

TEST(Corpus, ErrorsNameTheLine) {
  const auto dup = error_of(std::string(kHeader) + "E1,,Spam,2001-01-01,,,,,\n"
                                                   "E1,,Spam,2001-01-01,,,,,\n");
  EXPECT_EQ(dup.code(), ErrorCode::kDuplicate);
  EXPECT_NE(std::string(dup.what()).find("manifest line 3"), std::string::npos);

  const auto type = error_of(std::string(kHeader) + "E1,,Malware,2001-01-01,,,,,\n");
  EXPECT_EQ(type.code(), ErrorCode::kSchema);
  EXPECT_NE(std::string(type.what()).find("line 2"), std::string::npos);

  EXPECT_EQ(error_of(std::string(kHeader) + "E1,,Spam,2001-02-30,,,,,\n").code(),
            ErrorCode::kParse);
  EXPECT_EQ(error_of(std::string(kHeader) + "E1,,Spam,1989-12-31,,,,,\n").code(),
            ErrorCode::kSchema);
  EXPECT_EQ(error_of(std::string(kHeader) + "E1,,Spam,2025-01-01,,,,,\n").code(),
            ErrorCode::kSchema);
  EXPECT_EQ(error_of(std::string(kHeader) + "E1,,Spam,2001-01-01,,,,maybe,\n").code(),
            ErrorCode::kSchema);
  EXPECT_EQ(error_of("email_id,date\nE1,2001-01-01\n").code(), ErrorCode::kSchema);
}

TEST(Corpus, JsonErrorsNameTheElement) {
  const auto e = error_of(R"([{"email_id":"A","email_type":"Spam","date":"2001-01-01"},
                              {"email_id":"B","email_type":"Spam","date":"bad"}])");
  EXPECT_NE(std::string(e.what()).find("manifest[1]"), std::string::npos) << e.what();
  EXPECT_EQ(error_of("[1, 2").code(), ErrorCode::kParse);
}

TEST(Corpus, EmptyManifest) {
  const auto idx = ingest_manifest(kHeader, 2024);
  EXPECT_EQ(idx.size(), 0u);
  EXPECT_EQ(idx.percentage(EmailType::kPhishing), 0.0);
}

TEST(Corpus, Validation) {
  const auto dir = testkit::temp_dir("corpus");
  std::ofstream(dir / "E1.png") << "png";
  const auto idx = ingest_manifest(std::string(kHeader) +
                                       "E1,,Phishing,2006-12-04,,,E1.png,true,false\n"
                                       "E2,,Spam,2006-01-01,,,E2.png,false,true\n"
                                       "E3,,Scam,2010-01-01,,,,true,true\n",
                                   2024);
  const auto plain = validate_corpus(idx);
  EXPECT_EQ(plain.missing_screenshots, (std::vector<std::string>{"E3"}));
  EXPECT_EQ(plain.reconstructed_unsanitized, (std::vector<std::string>{"E2"}));
  EXPECT_EQ(plain.year_histogram.at(2006), 2u);
  EXPECT_FALSE(plain.clean());
  const auto rooted = validate_corpus(idx, dir);
  EXPECT_EQ(rooted.missing_screenshots, (std::vector<std::string>{"E2", "E3"}));
  EXPECT_NE(validation_report_json(rooted).find("\"clean\": false"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(EmailHeaders, FoldedHeadersAndBodyStop) {
  const auto h = parse_email_headers(
      "From: \"Bank\" <alerts@bank.example>\r\n"
      "To: victim@example.org\r\n"
      "Subject: Your account\r\n"
      "  has been locked\r\n"
      "Date: Mon, 4 Dec 2006 10:00:00 +0100\r\n"
      "garbage line\r\n"
      "\r\n"
      "Subject: not a header\r\n");
  EXPECT_EQ(h.from, "\"Bank\" <alerts@bank.example>");
  // Unfolding drops the line break only; the folding whitespace stays.
  EXPECT_EQ(h.subject, "Your account  has been locked");
  ASSERT_TRUE(h.date);
  EXPECT_EQ(h.date->date, year_month_day(year(2006), month(12), day(4)));
  EXPECT_EQ(h.date->utc_offset_minutes, 60);
  EXPECT_EQ(h.parse_warnings.size(), 1u);
}

TEST(EmailHeaders, NoHeadersIsParseError) {
  try {
    parse_email_headers("just a body\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(EmailHeaders, RfcDates) {
  const auto a = parse_rfc5322_date("4 Dec 06 10:00 EST");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->date.year(), year(2006));
  EXPECT_EQ(a->utc_offset_minutes, -300);
  EXPECT_FALSE(parse_rfc5322_date("yesterday"));
  EXPECT_FALSE(parse_rfc5322_date("Mon, 31 Feb 2006 10:00:00 +0000"));
}
