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

#ifndef SOPHGRADE_OUTLIER_HPP_
#define SOPHGRADE_OUTLIER_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sophgrade/grades.hpp"

namespace sophgrade {

enum class Classification {
  kBelowThreshold,  // spectrum < t
  kSplit,           // two values, held by floor(n/2) and ceil(n/2) graders
  kSequence,        // sorted grades are consecutive integers
  kAtThreshold,     // spectrum == t, neither split nor sequence
  kEliminateMax,
  kEliminateMin,
  kTieKeepAll,      // max - max2 == min2 - min
};

std::string_view classification_name(Classification c);

struct OutlierDecision {
  int spectrum = 0;
  int min = 0;
  int max = 0;
  int second_min = 0;
  int second_max = 0;
  Classification classification = Classification::kBelowThreshold;
  std::optional<std::string> eliminated_grader;

  bool eliminates() const { return eliminated_grader.has_value(); }
};

// floor(scale.max / 2): 3 on [0,7], 2 on [0,5].
int outlier_threshold(const GradeScale& scale);

// Rule, in order, over the n' grades present:
//   spectrum < t                         -> BelowThreshold
//   split                                -> Split
//   sequence                             -> Sequence
//   spectrum == t                        -> AtThreshold
//   max - max2 > min2 - min              -> EliminateMax
//   max - max2 < min2 - min              -> EliminateMin
//   otherwise                            -> TieKeepAll
// Throws Error(kInvalidArgument) on an empty list, Error(kOutOfScale) on a
// grade outside the scale. Independent of grader order except for which of
// several tied extreme graders is named (the first in grader-id order).
OutlierDecision classify_cell(std::span<const GraderGrade> grades,
                              const GradeScale& scale);

// Excluded graders per cell (J' for PTech cells, J'' for PTac cells).
class ValidityMask {
 public:
  void exclude(const CellKey& key, std::string grader_id);

  bool is_excluded(const CellKey& key, std::string_view grader_id) const;
  const std::set<std::string>* excluded(const CellKey& key) const;
  const std::map<CellKey, std::set<std::string>>& entries() const {
    return excluded_;
  }
  std::size_t size() const;  // total excluded grades

 private:
  std::map<CellKey, std::set<std::string>> excluded_;
};

struct ConstructOutlierCount {
  std::string construct_id;
  Family family = Family::kPTech;
  std::size_t eliminated = 0;
  std::size_t splits = 0;
  std::size_t sequences = 0;
  std::size_t ties = 0;
};

struct OutlierReport {
  std::vector<ConstructOutlierCount> per_construct;  // graded order
  std::size_t cells = 0;
  std::size_t grades = 0;
  std::size_t eliminated_ptech = 0;
  std::size_t eliminated_ptac = 0;
  std::size_t grades_ptech = 0;
  std::size_t grades_ptac = 0;
  std::size_t splits = 0;
  std::size_t sequences = 0;
  std::size_t ties = 0;
  std::size_t emails_with_outliers = 0;
  std::vector<CellKey> split_cells;

  std::size_t eliminated() const { return eliminated_ptech + eliminated_ptac; }
};

struct OutlierAnalysis {
  ValidityMask mask;
  OutlierReport report;
  std::map<CellKey, OutlierDecision> decisions;
};

OutlierAnalysis apply_outlier_rule(const GradeMatrix& matrix);

// Structured form of the report (per-construct counts, family totals,
// split/sequence tallies).
std::string outlier_report_json(const OutlierReport& report);

// Mask as delimited text: email_id,construct_id,grader_id.
std::string export_mask(const GradeMatrix& matrix, const ValidityMask& mask);

}  // namespace sophgrade

#endif  // SOPHGRADE_OUTLIER_HPP_
