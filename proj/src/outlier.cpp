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

#include "sophgrade/outlier.hpp"

#include <algorithm>

#include "json.hpp"
#include "sophgrade/csv.hpp"
#include "sophgrade/error.hpp"

namespace sophgrade {

std::string_view classification_name(Classification c) {
  switch (c) {
    case Classification::kBelowThreshold: return "BelowThreshold";
    case Classification::kSplit: return "Split";
    case Classification::kSequence: return "Sequence";
    case Classification::kAtThreshold: return "AtThreshold";
    case Classification::kEliminateMax: return "EliminateMax";
    case Classification::kEliminateMin: return "EliminateMin";
    case Classification::kTieKeepAll: return "TieKeepAll";
  }
  return "?";
}

int outlier_threshold(const GradeScale& scale) { return scale.max / 2; }

namespace {

bool is_split(std::span<const int> sorted) {
  const std::size_t n = sorted.size();
  if (n < 2 || sorted.front() == sorted.back()) return false;
  const auto low = static_cast<std::size_t>(
      std::count(sorted.begin(), sorted.end(), sorted.front()));
  const auto high = static_cast<std::size_t>(
      std::count(sorted.begin(), sorted.end(), sorted.back()));
  if (low + high != n) return false;  // a third value is present
  const std::size_t floor_half = n / 2;
  const std::size_t ceil_half = n - floor_half;
  return (low == floor_half && high == ceil_half) ||
         (low == ceil_half && high == floor_half);
}

bool is_sequence(std::span<const int> sorted) {
  if (sorted.size() < 2) return false;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] != 1) return false;
  }
  return true;
}

}  // namespace

OutlierDecision classify_cell(std::span<const GraderGrade> grades,
                              const GradeScale& scale) {
  if (grades.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "classify_cell: empty grade list");
  }
  std::vector<int> sorted;
  sorted.reserve(grades.size());
  for (const auto& g : grades) {
    if (!scale.contains(g.grade)) {
      throw Error(ErrorCode::kOutOfScale,
                  "classify_cell: grade " + std::to_string(g.grade) +
                      " outside scale");
    }
    sorted.push_back(g.grade);
  }
  std::sort(sorted.begin(), sorted.end());

  OutlierDecision d;
  d.min = sorted.front();
  d.max = sorted.back();
  d.spectrum = d.max - d.min;
  // With one grade the "second" extremes are the grade itself.
  d.second_min = sorted.size() > 1 ? sorted[1] : d.min;
  d.second_max = sorted.size() > 1 ? sorted[sorted.size() - 2] : d.max;

  const int t = outlier_threshold(scale);
  if (d.spectrum < t) {
    d.classification = Classification::kBelowThreshold;
  } else if (is_split(sorted)) {
    d.classification = Classification::kSplit;
  } else if (is_sequence(sorted)) {
    d.classification = Classification::kSequence;
  } else if (d.spectrum == t) {
    d.classification = Classification::kAtThreshold;
  } else {
    const int d_max = d.max - d.second_max;
    const int d_min = d.second_min - d.min;
    if (d_max == d_min) {
      d.classification = Classification::kTieKeepAll;
    } else {
      const bool drop_max = d_max > d_min;
      d.classification = drop_max ? Classification::kEliminateMax
                                  : Classification::kEliminateMin;
      const int target = drop_max ? d.max : d.min;
      const GraderGrade* chosen = nullptr;
      for (const auto& g : grades) {
        if (g.grade == target &&
            (chosen == nullptr || g.grader_id < chosen->grader_id)) {
          chosen = &g;
        }
      }
      d.eliminated_grader = chosen->grader_id;
    }
  }
  return d;
}

void ValidityMask::exclude(const CellKey& key, std::string grader_id) {
  excluded_[key].insert(std::move(grader_id));
}

bool ValidityMask::is_excluded(const CellKey& key,
                               std::string_view grader_id) const {
  auto it = excluded_.find(key);
  return it != excluded_.end() && it->second.contains(std::string(grader_id));
}

const std::set<std::string>* ValidityMask::excluded(const CellKey& key) const {
  auto it = excluded_.find(key);
  return it == excluded_.end() ? nullptr : &it->second;
}

std::size_t ValidityMask::size() const {
  std::size_t n = 0;
  for (const auto& [key, graders] : excluded_) n += graders.size();
  return n;
}

OutlierAnalysis apply_outlier_rule(const GradeMatrix& matrix) {
  const ConstructCatalog& catalog = matrix.catalog();
  OutlierAnalysis out;
  OutlierReport& report = out.report;
  for (std::size_t i = 0; i < catalog.graded_count(); ++i) {
    report.per_construct.push_back(
        ConstructOutlierCount{catalog.graded(i).id, catalog.graded(i).family});
  }

  std::string last_email_with_outlier;
  for (const auto& [key, grades] : matrix.cells()) {
    if (grades.empty()) continue;
    const Family family = matrix.family(key.construct);
    const OutlierDecision decision = classify_cell(grades, catalog.scale(family));
    auto& counts = report.per_construct[key.construct];
    ++report.cells;
    report.grades += grades.size();
    (family == Family::kPTech ? report.grades_ptech : report.grades_ptac) +=
        grades.size();

    switch (decision.classification) {
      case Classification::kSplit:
        ++counts.splits;
        ++report.splits;
        report.split_cells.push_back(key);
        break;
      case Classification::kSequence:
        ++counts.sequences;
        ++report.sequences;
        break;
      case Classification::kTieKeepAll:
        ++counts.ties;
        ++report.ties;
        break;
      default:
        break;
    }
    if (decision.eliminates()) {
      out.mask.exclude(key, *decision.eliminated_grader);
      ++counts.eliminated;
      ++(family == Family::kPTech ? report.eliminated_ptech
                                  : report.eliminated_ptac);
      if (key.email_id != last_email_with_outlier) {
        ++report.emails_with_outliers;
        last_email_with_outlier = key.email_id;
      }
    }
    out.decisions.emplace(key, decision);
  }
  return out;
}

std::string outlier_report_json(const OutlierReport& report) {
  using nlohmann::json;
  json per = json::array();
  for (const auto& c : report.per_construct) {
    per.push_back({{"construct_id", c.construct_id},
                   {"family", family_name(c.family)},
                   {"eliminated", c.eliminated},
                   {"splits", c.splits},
                   {"sequences", c.sequences},
                   {"ties", c.ties}});
  }
  json doc;
  doc["per_construct"] = std::move(per);
  doc["totals"] = {{"cells", report.cells},
                   {"grades", report.grades},
                   {"eliminated", report.eliminated()},
                   {"splits", report.splits},
                   {"sequences", report.sequences},
                   {"ties", report.ties},
                   {"emails_with_outliers", report.emails_with_outliers}};
  doc["families"] = {
      {"ptech", {{"grades", report.grades_ptech},
                 {"eliminated", report.eliminated_ptech}}},
      {"ptac", {{"grades", report.grades_ptac},
                {"eliminated", report.eliminated_ptac}}}};
  return doc.dump(2) + "\n";
}

std::string export_mask(const GradeMatrix& matrix, const ValidityMask& mask) {
  std::string out = "email_id,construct_id,grader_id\n";
  for (const auto& [key, graders] : mask.entries()) {
    for (const auto& g : graders) {
      out += csv::join({key.email_id, matrix.construct_id(key.construct), g});
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace sophgrade
