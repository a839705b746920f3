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

#ifndef SOPHGRADE_GRADES_HPP_
#define SOPHGRADE_GRADES_HPP_

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sophgrade/corpus.hpp"
#include "sophgrade/taxonomy.hpp"

namespace sophgrade {

// One (email, construct) pair. construct is the catalog's graded index, so
// ordering follows catalog order within an email.
struct CellKey {
  std::string email_id;
  std::size_t construct = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct GraderGrade {
  std::string grader_id;
  int grade = 0;
  std::optional<std::string> submitted_at;  // ISO-8601, passed through

  friend bool operator==(const GraderGrade&, const GraderGrade&) = default;
};

// Sparse s[k,i,j]. A missing grade is simply absent from its cell.
class GradeMatrix {
 public:
  explicit GradeMatrix(std::shared_ptr<const ConstructCatalog> catalog);

  // Throws Error(kUnknownReference) for an unselected/unknown construct,
  // Error(kOutOfScale) for a grade outside the family's scale and
  // Error(kDuplicate) when the grader already graded this cell.
  void add(std::string_view email_id, std::string_view construct_id,
           std::string_view grader_id, int grade,
           std::optional<std::string> submitted_at = std::nullopt);

  const ConstructCatalog& catalog() const { return *catalog_; }
  const std::shared_ptr<const ConstructCatalog>& catalog_ptr() const {
    return catalog_;
  }

  // In order of first appearance.
  const std::vector<std::string>& graders() const { return graders_; }
  std::vector<std::string> email_ids() const;  // sorted, distinct
  std::size_t email_count() const;             // h

  const std::map<CellKey, std::vector<GraderGrade>>& cells() const {
    return cells_;
  }
  const std::vector<GraderGrade>* cell(const CellKey& key) const;
  std::size_t grade_count() const { return grade_count_; }

  const std::string& construct_id(std::size_t graded_index) const {
    return catalog_->graded(graded_index).id;
  }
  Family family(std::size_t graded_index) const {
    return catalog_->graded(graded_index).family;
  }

  friend bool operator==(const GradeMatrix& a, const GradeMatrix& b) {
    return *a.catalog_ == *b.catalog_ && a.cells_ == b.cells_;
  }

 private:
  std::shared_ptr<const ConstructCatalog> catalog_;
  std::vector<std::string> graders_;
  std::map<CellKey, std::vector<GraderGrade>> cells_;
  std::size_t grade_count_ = 0;
};

// Delimited text with header email_id,construct_id,grader_id,grade and an
// optional submitted_at column. When a corpus is given, every email_id must
// exist in it. Errors cite the file line.
GradeMatrix load_grades(std::string_view text,
                        std::shared_ptr<const ConstructCatalog> catalog,
                        const CorpusIndex* corpus = nullptr);

// Header plus one row per grade, cells in (email, catalog) order and grades
// in stored order. load_grades(export_grades(m)) == m.
std::string export_grades(const GradeMatrix& matrix);

inline constexpr std::string_view kGradeFileHeader =
    "email_id,construct_id,grader_id,grade,submitted_at";

}  // namespace sophgrade

#endif  // SOPHGRADE_GRADES_HPP_
