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

#include "sophgrade/sophistication.hpp"

#include <cstdio>

#include "sophgrade/csv.hpp"
#include "sophgrade/error.hpp"

namespace sophgrade {
namespace {

// Valid-grade mean for a cell, or nullopt when nothing valid remains.
std::optional<double> valid_mean(const std::vector<GraderGrade>* grades,
                                 const std::set<std::string>* excluded,
                                 std::size_t* valid_count) {
  if (grades == nullptr) return std::nullopt;
  // (sum over all graders - sum over excluded) / (n' - |J'|)
  long total = 0;
  long dropped = 0;
  std::size_t dropped_count = 0;
  for (const auto& g : *grades) {
    total += g.grade;
    if (excluded != nullptr && excluded->contains(g.grader_id)) {
      dropped += g.grade;
      ++dropped_count;
    }
  }
  const std::size_t valid = grades->size() - dropped_count;
  if (valid_count != nullptr) *valid_count = valid;
  if (valid == 0) return std::nullopt;
  return static_cast<double>(total - dropped) / static_cast<double>(valid);
}

double family_mean(const GradeMatrix& matrix, const ValidityMask& mask,
                   const std::string& email_id, Family family) {
  const auto indices = matrix.catalog().graded_indices(family);
  double acc = 0.0;
  for (std::size_t i : indices) {
    const CellKey key{email_id, i};
    const auto mean = valid_mean(matrix.cell(key), mask.excluded(key), nullptr);
    if (!mean) {
      throw Error(ErrorCode::kInsufficientData,
                  "no valid grades for cell (" + email_id + ", " +
                      matrix.construct_id(i) + ")");
    }
    acc += *mean;
  }
  return acc / static_cast<double>(indices.size());
}

}  // namespace

ConstructScore construct_score(const GradeMatrix& matrix,
                               const ValidityMask& mask,
                               std::string_view email_id,
                               std::string_view construct_id) {
  const auto index = matrix.catalog().graded_index(construct_id);
  if (!index) {
    throw Error(ErrorCode::kUnknownReference,
                "unknown construct '" + std::string(construct_id) + "'");
  }
  const CellKey key{std::string(email_id), *index};
  ConstructScore score;
  score.email_id = email_id;
  score.construct_id = construct_id;
  const auto* excluded = mask.excluded(key);
  if (excluded != nullptr) score.excluded = *excluded;
  const auto mean = valid_mean(matrix.cell(key), excluded, &score.valid_count);
  if (!mean) {
    throw Error(ErrorCode::kInsufficientData,
                "no valid grades for cell (" + std::string(email_id) + ", " +
                    std::string(construct_id) + ")");
  }
  score.mean = *mean;
  return score;
}

SophisticationVector email_sophistication(const GradeMatrix& matrix,
                                          const ValidityMask& mask,
                                          std::string_view email_id) {
  const std::string id(email_id);
  return SophisticationVector{id,
                              family_mean(matrix, mask, id, Family::kPTech),
                              family_mean(matrix, mask, id, Family::kPTac)};
}

std::vector<CohortRow> cohort_scores(const GradeMatrix& matrix,
                                     const ValidityMask& mask,
                                     const CorpusIndex& corpus) {
  const auto ids = matrix.email_ids();
  std::string missing;
  for (const auto& id : ids) {
    if (corpus.find(id) == nullptr) missing += (missing.empty() ? "" : ", ") + id;
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kUnknownReference,
                "graded emails missing from corpus: " + missing);
  }

  const std::size_t graded = matrix.catalog().graded_count();
  std::vector<CohortRow> rows;
  rows.reserve(ids.size());
  for (const auto& id : ids) {
    const EmailRecord& record = *corpus.find(id);
    const SophisticationVector v = email_sophistication(matrix, mask, id);
    CohortRow row{id, record.email_type, record.date, v.s_ptech, v.s_ptac, {}};
    row.construct_means.reserve(graded);
    for (std::size_t i = 0; i < graded; ++i) {
      const CellKey key{id, i};
      row.construct_means.push_back(
          *valid_mean(matrix.cell(key), mask.excluded(key), nullptr));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string cohort_csv(const std::vector<CohortRow>& rows) {
  std::string out = "email_id,email_type,year,s_ptech,s_ptac\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%d,%.4f,%.4f\n", r.year(), r.s_ptech,
                  r.s_ptac);
    out += csv::escape(r.email_id);
    out.push_back(',');
    out += email_type_name(r.email_type);
    out += buf;
  }
  return out;
}

}  // namespace sophgrade
