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

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "sophgrade/analysis.hpp"
#include "sophgrade/csv.hpp"
#include "sophgrade/error.hpp"

namespace sophgrade {

using nlohmann::json;

namespace {

constexpr const char* kEmptyCohort = "empty cohort";

// Scores and means are reported to 4 decimals.
double round4(double v) {
  const double r = std::round(v * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

json opt4(const std::optional<double>& v) {
  return v ? json(round4(*v)) : json(nullptr);
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", round4(v));
  return buf;
}

std::string fmt4(const std::optional<double>& v) { return v ? fmt4(*v) : ""; }

AlphaOutcome try_alpha(const GradeMatrix& matrix, const ValidityMask& mask,
                       Family family) {
  AlphaOutcome out;
  try {
    out.result = compute_alpha(matrix, mask, family);
  } catch (const Error& e) {
    out.error = std::string(error_code_name(e.code())) + ": " + e.what();
  }
  return out;
}

json alpha_json(const AlphaOutcome& outcome) {
  if (!outcome.result) return {{"error", outcome.error}};
  return json::parse(alpha_result_json(*outcome.result));
}

std::string trend_csv(const TrendSeries& ptech, const TrendSeries& ptac,
                      const char* key_name) {
  std::string out = std::string(key_name) + ",emails,mean_s_ptech,mean_s_ptac\n";
  for (std::size_t i = 0; i < ptech.points.size(); ++i) {
    out += ptech.points[i].key + "," + std::to_string(ptech.points[i].size) + "," +
           fmt4(ptech.points[i].mean) + "," + fmt4(ptac.points[i].mean) + "\n";
  }
  return out;
}

json trend_json(const TrendSeries& series) {
  json points = json::array();
  for (const auto& p : series.points) {
    points.push_back({{"group", p.key}, {"mean", round4(p.mean)}, {"emails", p.size}});
  }
  return {{"points", points}, {"warnings", series.warnings}};
}

}  // namespace

AnalysisResults run_analyses(const GradeMatrix& matrix, const CorpusIndex& corpus,
                             const AnalysisOptions& options) {
  AnalysisResults r;
  r.matrix = &matrix;
  r.corpus = &corpus;
  r.options = options;
  r.outliers = apply_outlier_rule(matrix);

  const ValidityMask none;
  for (Family family : {Family::kPTech, Family::kPTac}) {
    auto& slot = r.alpha[static_cast<std::size_t>(family)];
    slot[0] = try_alpha(matrix, none, family);
    slot[1] = try_alpha(matrix, r.outliers.mask, family);
  }

  r.cohort = cohort_scores(matrix, r.outliers.mask, corpus);
  r.construct_means = average_construct_grades(matrix, r.outliers.mask, corpus, true);
  r.type_comparison = zscore_by_type(r.cohort);
  if (r.cohort.size() >= 2) {
    r.correlations = correlation_matrix(r.cohort, r.construct_means.construct_ids);
  }
  r.high_sigma = high_sigma_report(matrix, options.high_sigma_threshold);
  r.splits = split_grade_summary(matrix, r.outliers.report, corpus);

  using Kind = TrendMetric::Kind;
  const TrendGrouping groupings[] = {TrendGrouping::kYear, TrendGrouping::kMonth};
  for (std::size_t g = 0; g < 2; ++g) {
    r.score_trends_ptech[g] = temporal_trend(r.cohort, {Kind::kSPTech, 0}, groupings[g]);
    r.score_trends_ptac[g] = temporal_trend(r.cohort, {Kind::kSPTac, 0}, groupings[g]);
  }
  if (const auto ctx = matrix.catalog().graded_index("contextualization")) {
    std::array<TrendSeries, 2> trends;
    for (std::size_t g = 0; g < 2; ++g) {
      trends[g] = temporal_trend(r.cohort, {Kind::kConstructMean, *ctx}, groupings[g]);
    }
    r.contextualization_trends = std::move(trends);
  }
  return r;
}

Report emit_report(const AnalysisResults& r) {
  const GradeMatrix& matrix = *r.matrix;
  const ConstructCatalog& catalog = matrix.catalog();
  Report report;
  json doc;
  const bool empty = matrix.cells().empty();

  doc["summary"] = {{"emails", matrix.email_count()},
                    {"graders", matrix.graders().size()},
                    {"grades", matrix.grade_count()},
                    {"ptech_constructs", catalog.ptech_count()},
                    {"ptac_constructs", catalog.ptac_count()},
                    {"status", empty ? kEmptyCohort : "ok"}};

  if (empty) {
    for (const char* section :
         {"agreement", "outliers", "cell_statistics", "rq1_construct_means",
          "rq2_zscore_by_type", "rq3_correlation", "rq4_high_sigma",
          "rq4_split_summary", "rq5_trends", "rq6_contextualization"}) {
      doc[section] = kEmptyCohort;
    }
    report.document = doc.dump(2) + "\n";
    return report;
  }

  // Agreement before/after outlier removal.
  json agreement;
  for (Family family : {Family::kPTech, Family::kPTac}) {
    const auto& slot = r.alpha[static_cast<std::size_t>(family)];
    agreement[std::string(family_name(family))] = {
        {"before_outlier_removal", alpha_json(slot[0])},
        {"after_outlier_removal", alpha_json(slot[1])}};
  }
  doc["agreement"] = std::move(agreement);
  doc["outliers"] = json::parse(outlier_report_json(r.outliers.report));

  // Per-cell Min / Max / Spectrum / sigma with the rule's classification.
  json cells = json::array();
  std::vector<int> grades;
  for (const auto& [key, cell] : matrix.cells()) {
    if (cell.empty()) continue;
    grades.clear();
    json by_grader = json::object();
    for (const auto& g : cell) {
      grades.push_back(g.grade);
      by_grader[g.grader_id] = g.grade;
    }
    const DescriptiveStats s = descriptive_stats(grades);
    const OutlierDecision& d = r.outliers.decisions.at(key);
    json entry = {{"email_id", key.email_id},
                  {"construct_id", matrix.construct_id(key.construct)},
                  {"grades", by_grader},
                  {"min", s.min},
                  {"max", s.max},
                  {"spectrum", s.spectrum},
                  {"sigma", round4(s.population_sigma)},
                  {"classification", classification_name(d.classification)}};
    if (d.eliminated_grader) entry["eliminated_grader"] = *d.eliminated_grader;
    cells.push_back(std::move(entry));
  }
  doc["cell_statistics"] = std::move(cells);

  // RQ1
  const ConstructMeanTable& means = r.construct_means;
  json rq1 = json::array();
  std::string rq1_csv = "construct_id,family,all,Phishing,Scam,Spam\n";
  for (std::size_t i = 0; i < means.construct_ids.size(); ++i) {
    json by_type;
    std::string row = means.construct_ids[i] + "," +
                      std::string(family_name(matrix.family(i))) + "," +
                      fmt4(means.overall[i]);
    for (EmailType t : kEmailTypes) {
      const auto& v = means.by_type[static_cast<std::size_t>(t)][i];
      by_type[std::string(email_type_name(t))] = opt4(v);
      row += "," + fmt4(v);
    }
    rq1.push_back({{"construct_id", means.construct_ids[i]},
                   {"family", family_name(matrix.family(i))},
                   {"mean", opt4(means.overall[i])},
                   {"by_type", by_type}});
    rq1_csv += row + "\n";
  }
  doc["rq1_construct_means"] = std::move(rq1);
  report.series.push_back({"rq1_construct_means.csv", std::move(rq1_csv)});

  // RQ2
  json rq2 = json::array();
  std::string rq2_csv = "email_type,emails,mean_z_s_ptech,mean_s_ptac\n";
  for (const auto& c : r.type_comparison) {
    rq2.push_back({{"email_type", email_type_name(c.type)},
                   {"emails", c.count},
                   {"mean_z_s_ptech", opt4(c.mean_z_ptech)},
                   {"mean_s_ptac", opt4(c.mean_s_ptac)}});
    rq2_csv += std::string(email_type_name(c.type)) + "," + std::to_string(c.count) +
               "," + fmt4(c.mean_z_ptech) + "," + fmt4(c.mean_s_ptac) + "\n";
  }
  doc["rq2_zscore_by_type"] = std::move(rq2);
  report.series.push_back({"rq2_zscore_by_type.csv", std::move(rq2_csv)});

  // RQ3
  if (r.correlations) {
    const CorrelationMatrix& m = *r.correlations;
    json rows = json::array();
    std::string csv_text = "construct_id";
    for (const auto& id : m.construct_ids) csv_text += "," + id;
    csv_text += "\n";
    for (std::size_t a = 0; a < m.size(); ++a) {
      json row = json::array();
      csv_text += m.construct_ids[a];
      for (std::size_t b = 0; b < m.size(); ++b) {
        row.push_back(opt4(m.at(a, b)));
        csv_text += "," + fmt4(m.at(a, b));
      }
      rows.push_back(std::move(row));
      csv_text += "\n";
    }
    doc["rq3_correlation"] = {{"constructs", m.construct_ids},
                              {"matrix", rows},
                              {"warnings", m.warnings}};
    report.series.push_back({"rq3_correlation.csv", std::move(csv_text)});
  } else {
    doc["rq3_correlation"] = {{"error", "needs at least two emails"}};
  }

  // RQ4
  json high = json::array();
  std::string high_csv = "email_id,construct_id,sigma\n";
  for (const auto& h : r.high_sigma) {
    high.push_back({{"email_id", h.email_id},
                    {"construct_id", h.construct_id},
                    {"sigma", round4(h.sigma)}});
    high_csv += csv::join({h.email_id, h.construct_id, fmt4(h.sigma)}) + "\n";
  }
  doc["rq4_high_sigma"] = {{"threshold", r.options.high_sigma_threshold},
                           {"cells", high}};
  report.series.push_back({"rq4_high_sigma.csv", std::move(high_csv)});

  json split_rows = json::array();
  std::string split_csv = "construct_id,Phishing,Scam,Spam,Total\n";
  for (std::size_t i = 0; i < r.splits.construct_ids.size(); ++i) {
    const auto& c = r.splits.counts[i];
    const std::size_t total = c[0] + c[1] + c[2];
    split_rows.push_back({{"construct_id", r.splits.construct_ids[i]},
                          {"Phishing", c[0]},
                          {"Scam", c[1]},
                          {"Spam", c[2]},
                          {"total", total}});
    split_csv += r.splits.construct_ids[i] + "," + std::to_string(c[0]) + "," +
                 std::to_string(c[1]) + "," + std::to_string(c[2]) + "," +
                 std::to_string(total) + "\n";
  }
  json split_totals;
  std::string total_row = "total";
  for (EmailType t : kEmailTypes) {
    const auto n = r.splits.totals_by_type[static_cast<std::size_t>(t)];
    split_totals[std::string(email_type_name(t))] = {
        {"count", n}, {"percent", round4(r.splits.percentage(t))}};
    total_row += "," + std::to_string(n);
  }
  split_totals["total"] = r.splits.total;
  split_csv += total_row + "," + std::to_string(r.splits.total) + "\n";
  doc["rq4_split_summary"] = {{"constructs", split_rows}, {"totals", split_totals}};
  report.series.push_back({"rq4_split_summary.csv", std::move(split_csv)});

  // RQ5 / RQ6
  doc["rq5_trends"] = {
      {"year", {{"s_ptech", trend_json(r.score_trends_ptech[0])},
                {"s_ptac", trend_json(r.score_trends_ptac[0])}}},
      {"month", {{"s_ptech", trend_json(r.score_trends_ptech[1])},
                 {"s_ptac", trend_json(r.score_trends_ptac[1])}}}};
  report.series.push_back({"rq5_trend_year.csv",
                           trend_csv(r.score_trends_ptech[0], r.score_trends_ptac[0], "year")});
  report.series.push_back({"rq5_trend_month.csv",
                           trend_csv(r.score_trends_ptech[1], r.score_trends_ptac[1], "month")});
  if (r.contextualization_trends) {
    const auto& t = *r.contextualization_trends;
    doc["rq6_contextualization"] = {{"year", trend_json(t[0])},
                                    {"month", trend_json(t[1])}};
    for (std::size_t g = 0; g < 2; ++g) {
      std::string text = g == 0 ? "year,emails,mean\n" : "month,emails,mean\n";
      for (const auto& p : t[g].points) {
        text += p.key + "," + std::to_string(p.size) + "," + fmt4(p.mean) + "\n";
      }
      report.series.push_back({g == 0 ? "rq6_contextualization_year.csv"
                                      : "rq6_contextualization_month.csv",
                               std::move(text)});
    }
  } else {
    doc["rq6_contextualization"] = {{"error", "contextualization is not graded"}};
  }

  std::string outlier_csv = "construct_id,family,eliminated,splits,sequences\n";
  for (const auto& c : r.outliers.report.per_construct) {
    outlier_csv += c.construct_id + "," + std::string(family_name(c.family)) + "," +
                   std::to_string(c.eliminated) + "," + std::to_string(c.splits) +
                   "," + std::to_string(c.sequences) + "\n";
  }
  report.series.push_back({"outliers_per_construct.csv", std::move(outlier_csv)});
  report.series.push_back({"cohort.csv", cohort_csv(r.cohort)});

  report.document = doc.dump(2) + "\n";
  return report;
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, dir.string() + ": " + ec.message());
  }
  auto write = [](const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw Error(ErrorCode::kIo, path.string() + ": write failed");
  };
  write(dir / "report.json", report.document);
  for (const auto& s : report.series) write(dir / s.name, s.content);
}

}  // namespace sophgrade
