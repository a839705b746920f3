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

#ifndef SOPHGRADE_SOPHISTICATION_HPP_
#define SOPHGRADE_SOPHISTICATION_HPP_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sophgrade/corpus.hpp"
#include "sophgrade/grades.hpp"
#include "sophgrade/outlier.hpp"

namespace sophgrade {

struct ConstructScore {
  std::string email_id;
  std::string construct_id;
  double mean = 0.0;
  std::size_t valid_count = 0;
  std::set<std::string> excluded;
};

// Mean of the present grades minus the graders excluded by the mask.
// Throws Error(kInsufficientData, "no valid grades for cell ...").
ConstructScore construct_score(const GradeMatrix& matrix,
                               const ValidityMask& mask,
                               std::string_view email_id,
                               std::string_view construct_id);

struct SophisticationVector {
  std::string email_id;
  double s_ptech = 0.0;  // in [0, gamma]
  double s_ptac = 0.0;   // in [0, beta]
};

// Unweighted means of the per-construct scores over the selected PTechs and
// the selected PTacs. Errors name the construct lacking valid grades.
SophisticationVector email_sophistication(const GradeMatrix& matrix,
                                          const ValidityMask& mask,
                                          std::string_view email_id);

struct CohortRow {
  std::string email_id;
  EmailType email_type = EmailType::kPhishing;
  Date date;
  double s_ptech = 0.0;
  double s_ptac = 0.0;
  std::vector<double> construct_means;  // graded order

  int year() const { return static_cast<int>(date.year()); }
};

// One row per graded email, ordered by email_id. Throws
// Error(kUnknownReference) listing every graded email absent from the
// corpus.
std::vector<CohortRow> cohort_scores(const GradeMatrix& matrix,
                                     const ValidityMask& mask,
                                     const CorpusIndex& corpus);

// email_id,email_type,year,s_ptech,s_ptac with scores to 4 decimals.
std::string cohort_csv(const std::vector<CohortRow>& rows);

}  // namespace sophgrade

#endif  // SOPHGRADE_SOPHISTICATION_HPP_
