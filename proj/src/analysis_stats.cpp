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
#include <cmath>
#include <map>

#include "sophgrade/analysis.hpp"
#include "sophgrade/error.hpp"
#include "sophgrade/kernels.hpp"

namespace sophgrade {
namespace {

bool is_constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

double mean_of(std::span<const double> v) {
  return kernels::sum(v) / static_cast<double>(v.size());
}

double population_sigma(std::span<const double> v, double mean) {
  return std::sqrt(kernels::sum_squared_deviations(v, mean) /
                   static_cast<double>(v.size()));
}

}  // namespace

DescriptiveStats descriptive_stats(std::span<const int> grades) {
  if (grades.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "descriptive_stats: empty list");
  }
  std::vector<double> values(grades.begin(), grades.end());
  DescriptiveStats s;
  const auto [lo, hi] = std::minmax_element(grades.begin(), grades.end());
  s.min = *lo;
  s.max = *hi;
  s.spectrum = s.max - s.min;
  s.mean = mean_of(values);
  s.population_sigma = s.spectrum == 0 ? 0.0 : population_sigma(values, s.mean);
  return s;
}

ConstructMeanTable average_construct_grades(const GradeMatrix& matrix,
                                            const ValidityMask& mask,
                                            const CorpusIndex& corpus,
                                            bool group_by_type) {
  const std::size_t graded = matrix.catalog().graded_count();
  ConstructMeanTable table;
  table.grouped = group_by_type;
  for (std::size_t i = 0; i < graded; ++i) {
    table.construct_ids.push_back(matrix.construct_id(i));
  }

  // Accumulate per construct over emails with at least one valid grade.
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::vector<Acc> overall(graded);
  std::array<std::vector<Acc>, 3> typed;
  for (auto& t : typed) t.resize(graded);

  for (const auto& email : matrix.email_ids()) {
    std::optional<std::size_t> type_index;
    if (group_by_type) {
      const EmailRecord* record = corpus.find(email);
      if (record == nullptr) {
        throw Error(ErrorCode::kUnknownReference,
                    "graded email '" + email + "' missing from corpus");
      }
      type_index = static_cast<std::size_t>(record->email_type);
      ++table.emails_by_type[*type_index];
    }
    for (std::size_t i = 0; i < graded; ++i) {
      const CellKey key{email, i};
      const auto* grades = matrix.cell(key);
      if (grades == nullptr) continue;
      const auto* excluded = mask.excluded(key);
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& g : *grades) {
        if (excluded != nullptr && excluded->contains(g.grader_id)) continue;
        sum += g.grade;
        ++n;
      }
      if (n == 0) continue;
      const double cell_mean = sum / static_cast<double>(n);
      overall[i].sum += cell_mean;
      ++overall[i].n;
      if (type_index) {
        typed[*type_index][i].sum += cell_mean;
        ++typed[*type_index][i].n;
      }
    }
  }

  auto finish = [](const std::vector<Acc>& accs) {
    std::vector<std::optional<double>> out;
    for (const auto& a : accs) {
      out.push_back(a.n == 0 ? std::nullopt
                             : std::optional(a.sum / static_cast<double>(a.n)));
    }
    return out;
  };
  table.overall = finish(overall);
  if (group_by_type) {
    for (std::size_t t = 0; t < 3; ++t) table.by_type[t] = finish(typed[t]);
  }
  return table;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kInvalidArgument, "pearson: length mismatch");
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "pearson: need at least two points");
  }
  if (is_constant(xs) || is_constant(ys)) {
    throw Error(ErrorCode::kDegenerate, "undefined correlation (zero variance)");
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  const double sxy = kernels::sum_cross_deviations(xs, ys, mx, my);
  const double sxx = kernels::sum_squared_deviations(xs, mx);
  const double syy = kernels::sum_squared_deviations(ys, my);
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(
    const std::vector<CohortRow>& cohort,
    const std::vector<std::string>& construct_ids) {
  if (cohort.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "correlation matrix needs at least two emails");
  }
  const std::size_t k = construct_ids.size();
  const std::size_t n = cohort.size();
  // Column-major copies so each construct is contiguous.
  std::vector<std::vector<double>> columns(k, std::vector<double>(n));
  for (std::size_t e = 0; e < n; ++e) {
    if (cohort[e].construct_means.size() != k) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cohort row width does not match construct list");
    }
    for (std::size_t c = 0; c < k; ++c) columns[c][e] = cohort[e].construct_means[c];
  }

  std::vector<double> means(k);
  std::vector<double> norms(k);
  std::vector<bool> constant(k);
  CorrelationMatrix out;
  out.construct_ids = construct_ids;
  out.entries.assign(k * k, std::nullopt);
  for (std::size_t c = 0; c < k; ++c) {
    constant[c] = is_constant(columns[c]);
    means[c] = mean_of(columns[c]);
    norms[c] = std::sqrt(kernels::sum_squared_deviations(columns[c], means[c]));
    if (constant[c]) {
      out.warnings.push_back("construct '" + construct_ids[c] +
                             "' is constant; its correlations are undefined");
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    if (constant[a]) continue;
    out.entries[a * k + a] = 1.0;
    for (std::size_t b = a + 1; b < k; ++b) {
      if (constant[b]) continue;
      const double r = std::clamp(
          kernels::sum_cross_deviations(columns[a], columns[b], means[a], means[b]) /
              (norms[a] * norms[b]),
          -1.0, 1.0);
      out.entries[a * k + b] = r;
      out.entries[b * k + a] = r;
    }
  }
  return out;
}

std::vector<double> zscore_normalize(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "z-score needs at least two values");
  }
  if (is_constant(values)) {
    throw Error(ErrorCode::kDegenerate, "z-score undefined (zero variance)");
  }
  const double mean = mean_of(values);
  const double sigma = population_sigma(values, mean);
  std::vector<double> out(values.size());
  kernels::affine(values, mean, 1.0 / sigma, out);
  return out;
}

std::vector<TypeComparison> zscore_by_type(const std::vector<CohortRow>& cohort) {
  std::vector<TypeComparison> out;
  for (EmailType t : kEmailTypes) {
    TypeComparison c;
    c.type = t;
    out.push_back(c);
  }
  if (cohort.empty()) return out;

  std::vector<double> ptech;
  for (const auto& row : cohort) ptech.push_back(row.s_ptech);
  std::optional<std::vector<double>> z;
  if (cohort.size() >= 2 && !is_constant(ptech)) z = zscore_normalize(ptech);

  std::array<double, 3> z_sum{};
  std::array<double, 3> ptac_sum{};
  for (std::size_t e = 0; e < cohort.size(); ++e) {
    const auto t = static_cast<std::size_t>(cohort[e].email_type);
    ++out[t].count;
    if (z) z_sum[t] += (*z)[e];
    ptac_sum[t] += cohort[e].s_ptac;
  }
  for (std::size_t t = 0; t < 3; ++t) {
    if (out[t].count == 0) continue;
    const auto n = static_cast<double>(out[t].count);
    if (z) out[t].mean_z_ptech = z_sum[t] / n;
    out[t].mean_s_ptac = ptac_sum[t] / n;
  }
  return out;
}

double SplitSummary::percentage(EmailType type) const {
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(totals_by_type[static_cast<std::size_t>(type)]) /
         static_cast<double>(total);
}

SplitSummary split_grade_summary(const GradeMatrix& matrix,
                                 const OutlierReport& report,
                                 const CorpusIndex& corpus) {
  SplitSummary s;
  const std::size_t graded = matrix.catalog().graded_count();
  for (std::size_t i = 0; i < graded; ++i) {
    s.construct_ids.push_back(matrix.construct_id(i));
  }
  s.counts.assign(graded, {});
  for (const auto& key : report.split_cells) {
    const EmailRecord* record = corpus.find(key.email_id);
    if (record == nullptr) {
      throw Error(ErrorCode::kUnknownReference,
                  "graded email '" + key.email_id + "' missing from corpus");
    }
    const auto t = static_cast<std::size_t>(record->email_type);
    ++s.counts[key.construct][t];
    ++s.totals_by_type[t];
    ++s.total;
  }
  return s;
}

std::vector<HighSigmaCell> high_sigma_report(const GradeMatrix& matrix,
                                             double threshold) {
  if (!(threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma threshold must be positive");
  }
  std::vector<HighSigmaCell> out;
  std::vector<int> grades;
  for (const auto& [key, cell] : matrix.cells()) {
    if (cell.empty()) continue;
    grades.clear();
    for (const auto& g : cell) grades.push_back(g.grade);
    const double sigma = descriptive_stats(grades).population_sigma;
    if (sigma >= threshold - 1e-12) {
      out.push_back(HighSigmaCell{key.email_id, matrix.construct_id(key.construct),
                                  sigma});
    }
  }
  // Cells arrive in (email, catalog) order; stable sort keeps it for ties.
  std::stable_sort(out.begin(), out.end(),
                   [](const HighSigmaCell& a, const HighSigmaCell& b) {
                     return a.sigma > b.sigma;
                   });
  return out;
}

TrendSeries temporal_trend(const std::vector<CohortRow>& cohort,
                           TrendMetric metric, TrendGrouping grouping) {
  TrendSeries series;
  series.grouping = grouping;
  // Keys sort chronologically as zero-padded strings.
  struct Acc {
    double sum = 0.0;
    std::size_t used = 0;
    std::size_t members = 0;
  };
  std::map<std::string, Acc> groups;
  for (const auto& row : cohort) {
    char key[16];
    if (grouping == TrendGrouping::kYear) {
      std::snprintf(key, sizeof key, "%04d", row.year());
    } else {
      std::snprintf(key, sizeof key, "%04d-%02u", row.year(),
                    static_cast<unsigned>(row.date.month()));
    }
    Acc& acc = groups[key];
    ++acc.members;
    std::optional<double> value;
    switch (metric.kind) {
      case TrendMetric::Kind::kSPTech: value = row.s_ptech; break;
      case TrendMetric::Kind::kSPTac: value = row.s_ptac; break;
      case TrendMetric::Kind::kConstructMean:
        if (metric.construct < row.construct_means.size()) {
          value = row.construct_means[metric.construct];
        }
        break;
    }
    if (value) {
      acc.sum += *value;
      ++acc.used;
    }
  }
  for (const auto& [key, acc] : groups) {
    if (acc.used == 0) {
      series.warnings.push_back("group " + key + " has no values; omitted");
      continue;
    }
    series.points.push_back(
        TrendPoint{key, acc.sum / static_cast<double>(acc.used), acc.members});
  }
  return series;
}

}  // namespace sophgrade
