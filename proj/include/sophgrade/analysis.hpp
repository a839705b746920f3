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

#ifndef SOPHGRADE_ANALYSIS_HPP_
#define SOPHGRADE_ANALYSIS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sophgrade/agreement.hpp"
#include "sophgrade/corpus.hpp"
#include "sophgrade/grades.hpp"
#include "sophgrade/outlier.hpp"
#include "sophgrade/sophistication.hpp"

namespace sophgrade {

struct DescriptiveStats {
  int min = 0;
  int max = 0;
  int spectrum = 0;
  double mean = 0.0;
  double population_sigma = 0.0;
};

// Throws Error(kInvalidArgument) on an empty list.
DescriptiveStats descriptive_stats(std::span<const int> grades);

// Per construct, the mean over emails of the valid-grade cell means.
struct ConstructMeanTable {
  std::vector<std::string> construct_ids;  // graded order
  std::vector<std::optional<double>> overall;
  bool grouped = false;
  std::array<std::vector<std::optional<double>>, 3> by_type;  // when grouped
  std::array<std::size_t, 3> emails_by_type{};
};

ConstructMeanTable average_construct_grades(const GradeMatrix& matrix,
                                            const ValidityMask& mask,
                                            const CorpusIndex& corpus,
                                            bool group_by_type);

// Product-moment correlation. Throws Error(kInvalidArgument) for length
// mismatch or fewer than two points and Error(kDegenerate, "undefined
// correlation (zero variance)") when either series is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct CorrelationMatrix {
  std::vector<std::string> construct_ids;
  std::vector<std::optional<double>> entries;  // row-major, absent = undefined
  std::vector<std::string> warnings;

  std::size_t size() const { return construct_ids.size(); }
  const std::optional<double>& at(std::size_t i, std::size_t j) const {
    return entries[i * construct_ids.size() + j];
  }
};

// Pairwise correlation of per-email construct means. Pairs involving a
// constant construct are absent and produce a warning. Throws
// Error(kInsufficientData) with fewer than two emails.
CorrelationMatrix correlation_matrix(const std::vector<CohortRow>& cohort,
                                     const std::vector<std::string>& construct_ids);

// (x - mean) / population sigma. Throws Error(kInvalidArgument) for fewer
// than two values and Error(kDegenerate) for zero variance.
std::vector<double> zscore_normalize(std::span<const double> values);

struct TypeComparison {
  EmailType type = EmailType::kPhishing;
  std::size_t count = 0;
  std::optional<double> mean_z_ptech;  // pooled z-score of s_ptech
  std::optional<double> mean_s_ptac;   // raw
};

// z-scores s_ptech over the whole cohort, then averages per email type.
// PTac scores stay on their original scale.
std::vector<TypeComparison> zscore_by_type(const std::vector<CohortRow>& cohort);

struct SplitSummary {
  std::vector<std::string> construct_ids;
  std::vector<std::array<std::size_t, 3>> counts;  // [construct][type]
  std::array<std::size_t, 3> totals_by_type{};
  std::size_t total = 0;

  double percentage(EmailType type) const;
};

SplitSummary split_grade_summary(const GradeMatrix& matrix,
                                 const OutlierReport& report,
                                 const CorpusIndex& corpus);

struct HighSigmaCell {
  std::string email_id;
  std::string construct_id;
  double sigma = 0.0;
};

// Cells whose raw grades have population sigma >= threshold, largest first.
// Throws Error(kInvalidArgument) when threshold <= 0.
std::vector<HighSigmaCell> high_sigma_report(const GradeMatrix& matrix,
                                             double threshold);

struct TrendMetric {
  enum class Kind { kSPTech, kSPTac, kConstructMean };
  Kind kind = Kind::kSPTech;
  std::size_t construct = 0;  // graded index for kConstructMean
};

enum class TrendGrouping { kYear, kMonth };

struct TrendPoint {
  std::string key;  // "2006" or "2021-12"
  double mean = 0.0;
  std::size_t size = 0;
};

struct TrendSeries {
  TrendGrouping grouping = TrendGrouping::kYear;
  std::vector<TrendPoint> points;  // chronological
  std::vector<std::string> warnings;
};

TrendSeries temporal_trend(const std::vector<CohortRow>& cohort,
                           TrendMetric metric, TrendGrouping grouping);

struct AnalysisOptions {
  double high_sigma_threshold = 2.0;
};

struct AlphaOutcome {
  std::optional<AlphaResult> result;
  std::string error;  // set when result is empty
};

struct AnalysisResults {
  const GradeMatrix* matrix = nullptr;
  const CorpusIndex* corpus = nullptr;
  OutlierAnalysis outliers;
  // [family][0 = before outlier removal, 1 = after]
  std::array<std::array<AlphaOutcome, 2>, 2> alpha;
  std::vector<CohortRow> cohort;
  ConstructMeanTable construct_means;
  std::vector<TypeComparison> type_comparison;
  std::optional<CorrelationMatrix> correlations;
  std::vector<HighSigmaCell> high_sigma;
  SplitSummary splits;
  std::array<TrendSeries, 2> score_trends_ptech;  // [year, month]
  std::array<TrendSeries, 2> score_trends_ptac;
  std::optional<std::array<TrendSeries, 2>> contextualization_trends;
  AnalysisOptions options;
};

// Runs every analysis over an immutable snapshot. Both references must
// outlive the result.
AnalysisResults run_analyses(const GradeMatrix& matrix, const CorpusIndex& corpus,
                             const AnalysisOptions& options = {});

struct SeriesFile {
  std::string name;
  std::string content;
};

struct Report {
  std::string document;  // JSON
  std::vector<SeriesFile> series;
};

// Deterministic for identical input.
Report emit_report(const AnalysisResults& results);

// Writes report.json and the series files. Throws Error(kIo) naming the
// path on failure.
void write_report(const Report& report, const std::filesystem::path& dir);

}  // namespace sophgrade

#endif  // SOPHGRADE_ANALYSIS_HPP_
