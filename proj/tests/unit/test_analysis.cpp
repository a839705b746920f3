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

#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"
#include "sophgrade/analysis.hpp"
#include "sophgrade/error.hpp"
#include "synthetic.hpp"

using namespace sophgrade;

namespace {

std::shared_ptr<const ConstructCatalog> catalog() {
  static const auto c = std::make_shared<ConstructCatalog>(default_catalog());
  return c;
}

// Textbook two-pass formula in long double.
double direct_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

struct Cohort {
  CorpusIndex corpus;
  GradeMatrix matrix;
};

Cohort synthetic(std::size_t emails, std::uint64_t seed, double corrupt = 0.0) {
  const auto d = testkit::make_synthetic(
      default_catalog(), {.emails = emails, .seed = seed, .corrupt_fraction = corrupt});
  auto corpus = ingest_manifest(d.manifest, 2024);
  auto m = load_grades(d.grades, catalog(), &corpus);
  return {std::move(corpus), std::move(m)};
}

}  // namespace

TEST(Stats, DescriptiveRowsOfE129) {
  struct Row {
    std::vector<int> g;
    double sigma;
  };
  const Row rows[] = {{{1, 2, 0, 0}, 0.83}, {{2, 3, 4, 4}, 0.83}, {{3, 3, 2, 3}, 0.43},
                      {{1, 2, 2, 5}, 1.50}, {{0, 0, 2, 0}, 0.87}, {{2, 2, 2, 2}, 0.0}};
  for (const auto& r : rows) {
    const auto s = descriptive_stats(r.g);
    EXPECT_NEAR(s.population_sigma, r.sigma, 0.005);
    EXPECT_EQ(s.spectrum, s.max - s.min);
  }
  const auto fam = descriptive_stats(std::vector<int>{1, 2, 2});
  EXPECT_NEAR(fam.mean, 1.6667, 1e-4);
  EXPECT_NEAR(fam.population_sigma, 0.47, 0.005);
  EXPECT_THROW(descriptive_stats(std::vector<int>{}), Error);
}

TEST(Stats, PearsonAgainstDirectFormula) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> d(0.0, 3.0);
  std::uniform_int_distribution<std::size_t> len(2, 300);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = len(rng);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = d(rng) + 5.0;
      y[i] = 0.4 * x[i] + d(rng);
    }
    EXPECT_NEAR(pearson(x, y), direct_pearson(x, y), 1e-12);
  }
}

TEST(Stats, PearsonEdges) {
  const std::vector<double> x = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(pearson(x, std::vector<double>{2, 4, 6, 8}), 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, std::vector<double>{8, 6, 4, 2}), -1.0);
  try {
    pearson(x, std::vector<double>{3, 3, 3, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerate);
    EXPECT_STREQ(e.what(), "undefined correlation (zero variance)");
  }
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), Error);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST(Stats, ZscoreMoments) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(2 + trial * 7);
    for (auto& x : v) x = d(rng);
    const auto z = zscore_normalize(v);
    long double m = 0, s = 0;
    for (double e : z) m += e;
    m /= z.size();
    for (double e : z) s += (e - m) * (e - m);
    EXPECT_NEAR(static_cast<double>(m), 0.0, 1e-12);
    EXPECT_NEAR(static_cast<double>(std::sqrt(s / z.size())), 1.0, 1e-12);
  }
  EXPECT_THROW(zscore_normalize(std::vector<double>{2, 2, 2}), Error);
  EXPECT_THROW(zscore_normalize(std::vector<double>{2}), Error);
}

TEST(Stats, CorrelationMatrixShape) {
  const auto c = synthetic(150, 8);
  const auto rows = cohort_scores(c.matrix, {}, c.corpus);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < 15; ++i) ids.push_back(c.matrix.construct_id(i));
  const auto m = correlation_matrix(rows, ids);
  ASSERT_EQ(m.size(), 15u);
  for (std::size_t a = 0; a < 15; ++a) {
    ASSERT_TRUE(m.at(a, a));
    EXPECT_EQ(*m.at(a, a), 1.0);
    for (std::size_t b = 0; b < 15; ++b) {
      ASSERT_TRUE(m.at(a, b));
      EXPECT_EQ(*m.at(a, b), *m.at(b, a));
      EXPECT_LE(std::abs(*m.at(a, b)), 1.0);
    }
  }
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.construct_means[0]);
    y.push_back(r.construct_means[9]);
  }
  EXPECT_NEAR(*m.at(0, 9), direct_pearson(x, y), 1e-12);
}

TEST(Stats, CorrelationConstantColumnIsAbsent) {
  auto c = synthetic(5, 2);
  auto rows = cohort_scores(c.matrix, {}, c.corpus);
  for (auto& r : rows) r.construct_means[3] = 1.0;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < 15; ++i) ids.push_back(c.matrix.construct_id(i));
  const auto m = correlation_matrix(rows, ids);
  EXPECT_FALSE(m.at(3, 3));
  EXPECT_FALSE(m.at(3, 0));
  EXPECT_FALSE(m.at(0, 3));
  EXPECT_EQ(m.warnings.size(), 1u);
  rows.resize(1);
  EXPECT_THROW(correlation_matrix(rows, ids), Error);
}

TEST(Stats, ZscoreByTypePoolsCohort) {
  const auto c = synthetic(90, 12);
  const auto rows = cohort_scores(c.matrix, {}, c.corpus);
  const auto cmp = zscore_by_type(rows);
  ASSERT_EQ(cmp.size(), 3u);
  double weighted = 0.0;
  std::size_t total = 0;
  for (const auto& t : cmp) {
    ASSERT_TRUE(t.mean_z_ptech);
    weighted += *t.mean_z_ptech * static_cast<double>(t.count);
    total += t.count;
  }
  EXPECT_EQ(total, 90u);
  EXPECT_NEAR(weighted, 0.0, 1e-9);  // pooled z-scores sum to zero
  EXPECT_FALSE(zscore_by_type({})[0].mean_z_ptech);
}

TEST(Stats, AverageConstructGrades) {
  const auto c = synthetic(30, 6);
  const auto t = average_construct_grades(c.matrix, {}, c.corpus, true);
  ASSERT_EQ(t.overall.size(), 15u);
  EXPECT_EQ(t.emails_by_type[0] + t.emails_by_type[1] + t.emails_by_type[2], 30u);
  const auto rows = cohort_scores(c.matrix, {}, c.corpus);
  double s = 0.0;
  for (const auto& r : rows) s += r.construct_means[2];
  EXPECT_NEAR(*t.overall[2], s / 30.0, 1e-12);
}

TEST(Stats, SplitSummaryAndHighSigma) {
  GradeMatrix m(catalog());
  for (auto [g, v] : {std::pair{"a", 0}, {"b", 0}, {"c", 7}, {"d", 7}}) m.add("E1", "urgency", g, v);
  for (auto [g, v] : {std::pair{"a", 1}, {"b", 1}, {"c", 1}, {"d", 2}}) m.add("E2", "urgency", g, v);
  for (auto [g, v] : {std::pair{"a", 0}, {"b", 5}}) m.add("E2", "reward", g, v);
  const auto corpus = ingest_manifest(
      "email_id,email_type,date\nE1,Scam,2001-01-01\nE2,Spam,2002-01-01\n", 2024);
  const auto r = apply_outlier_rule(m);
  const auto s = split_grade_summary(m, r.report, corpus);
  EXPECT_EQ(s.total, 2u);
  EXPECT_EQ(s.counts[0][1], 1u);  // urgency, Scam
  EXPECT_EQ(s.counts[10][2], 1u);  // reward, Spam
  EXPECT_DOUBLE_EQ(s.percentage(EmailType::kScam), 50.0);

  const auto high = high_sigma_report(m, 2.0);
  ASSERT_EQ(high.size(), 2u);
  EXPECT_EQ(high[0].construct_id, "urgency");
  EXPECT_DOUBLE_EQ(high[0].sigma, 3.5);
  EXPECT_DOUBLE_EQ(high[1].sigma, 2.5);
  EXPECT_THROW(high_sigma_report(m, 0.0), Error);
}

TEST(Stats, TemporalTrend) {
  std::vector<CohortRow> rows(3);
  using namespace std::chrono;
  rows[0].date = year(2006) / month(12) / day(4);
  rows[0].s_ptech = 1.0;
  rows[1].date = year(2006) / month(1) / day(4);
  rows[1].s_ptech = 3.0;
  rows[2].date = year(2021) / month(12) / day(1);
  rows[2].s_ptech = 4.0;
  const auto y = temporal_trend(rows, {TrendMetric::Kind::kSPTech, 0}, TrendGrouping::kYear);
  ASSERT_EQ(y.points.size(), 2u);
  EXPECT_EQ(y.points[0].key, "2006");
  EXPECT_DOUBLE_EQ(y.points[0].mean, 2.0);
  EXPECT_EQ(y.points[0].size, 2u);
  const auto mo = temporal_trend(rows, {TrendMetric::Kind::kSPTech, 0}, TrendGrouping::kMonth);
  ASSERT_EQ(mo.points.size(), 3u);
  EXPECT_EQ(mo.points[0].key, "2006-01");
  const auto missing =
      temporal_trend(rows, {TrendMetric::Kind::kConstructMean, 4}, TrendGrouping::kYear);
  EXPECT_TRUE(missing.points.empty());
  EXPECT_EQ(missing.warnings.size(), 2u);
}

TEST(Report, DeterministicAndComplete) {
  const auto c = synthetic(60, 31, 0.1);
  const auto a = emit_report(run_analyses(c.matrix, c.corpus));
  const auto b = emit_report(run_analyses(c.matrix, c.corpus));
  EXPECT_EQ(a.document, b.document);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) EXPECT_EQ(a.series[i].content, b.series[i].content);
  const auto doc = nlohmann::json::parse(a.document);
  for (const char* key : {"summary", "agreement", "outliers", "cell_statistics",
                          "rq1_construct_means", "rq2_zscore_by_type", "rq3_correlation",
                          "rq4_high_sigma", "rq4_split_summary", "rq5_trends",
                          "rq6_contextualization"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["cell_statistics"].size(), 60u * 15u);
  EXPECT_TRUE(doc["agreement"]["ptech"]["after_outlier_removal"].contains("alpha"));

  const auto dir = testkit::temp_dir("report");
  write_report(a, dir);
  EXPECT_EQ(testkit::read_file(dir / "report.json"), a.document);
  EXPECT_TRUE(std::filesystem::exists(dir / "rq3_correlation.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "cohort.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Report, OutlierRemovalRaisesAlpha) {
  const auto c = synthetic(100, 77, 0.1);
  const auto r = run_analyses(c.matrix, c.corpus);
  const auto& tech = r.alpha[0];
  ASSERT_TRUE(tech[0].result && tech[1].result);
  EXPECT_GT(tech[1].result->alpha, tech[0].result->alpha);
}

TEST(Report, EmptyCohort) {
  const GradeMatrix m(catalog());
  const CorpusIndex corpus;
  const auto rep = emit_report(run_analyses(m, corpus));
  const auto doc = nlohmann::json::parse(rep.document);
  EXPECT_EQ(doc["summary"]["status"], "empty cohort");
  EXPECT_EQ(doc["rq1_construct_means"], "empty cohort");
}

TEST(Report, WriteFailureNamesPath) {
  const auto dir = testkit::temp_dir("report-fail");
  std::ofstream(dir / "blocker") << "x";
  try {
    write_report(Report{"{}", {}}, dir / "blocker" / "sub");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("blocker"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
