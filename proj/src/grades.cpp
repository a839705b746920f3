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

#include "sophgrade/grades.hpp"

#include <algorithm>
#include <charconv>

#include "sophgrade/csv.hpp"
#include "sophgrade/error.hpp"

namespace sophgrade {

GradeMatrix::GradeMatrix(std::shared_ptr<const ConstructCatalog> catalog)
    : catalog_(std::move(catalog)) {
  if (!catalog_) throw Error(ErrorCode::kInvalidArgument, "null catalog");
}

void GradeMatrix::add(std::string_view email_id, std::string_view construct_id,
                      std::string_view grader_id, int grade,
                      std::optional<std::string> submitted_at) {
  if (email_id.empty() || grader_id.empty()) {
    throw Error(ErrorCode::kSchema, "email_id and grader_id must be non-empty");
  }
  const auto index = catalog_->graded_index(construct_id);
  if (!index) {
    throw Error(ErrorCode::kUnknownReference,
                "unknown or unselected construct '" + std::string(construct_id) +
                    "'");
  }
  const Construct& construct = catalog_->graded(*index);
  const GradeScale& scale = catalog_->scale(construct.family);
  if (!scale.contains(grade)) {
    throw Error(ErrorCode::kOutOfScale,
                "grade " + std::to_string(grade) + " for construct '" +
                    construct.id + "' outside scale [" +
                    std::to_string(scale.min) + ", " + std::to_string(scale.max) +
                    "]");
  }
  auto& grades = cells_[CellKey{std::string(email_id), *index}];
  for (const auto& g : grades) {
    if (g.grader_id == grader_id) {
      throw Error(ErrorCode::kDuplicate,
                  "duplicate grade for (" + std::string(email_id) + ", " +
                      construct.id + ", " + std::string(grader_id) + ")");
    }
  }
  grades.push_back(GraderGrade{std::string(grader_id), grade,
                               std::move(submitted_at)});
  ++grade_count_;
  if (std::find(graders_.begin(), graders_.end(), grader_id) == graders_.end()) {
    graders_.emplace_back(grader_id);
  }
}

std::vector<std::string> GradeMatrix::email_ids() const {
  std::vector<std::string> ids;
  for (const auto& [key, grades] : cells_) {
    if (ids.empty() || ids.back() != key.email_id) ids.push_back(key.email_id);
  }
  return ids;
}

std::size_t GradeMatrix::email_count() const { return email_ids().size(); }

const std::vector<GraderGrade>* GradeMatrix::cell(const CellKey& key) const {
  auto it = cells_.find(key);
  return it == cells_.end() ? nullptr : &it->second;
}

GradeMatrix load_grades(std::string_view text,
                        std::shared_ptr<const ConstructCatalog> catalog,
                        const CorpusIndex* corpus) {
  GradeMatrix matrix(std::move(catalog));
  const auto rows = csv::parse(text);
  if (rows.empty()) throw Error(ErrorCode::kSchema, "grade file: missing header row");
  const csv::Header header(rows.front());
  const std::size_t c_email = header.require("email_id");
  const std::size_t c_construct = header.require("construct_id");
  const std::size_t c_grader = header.require("grader_id");
  const std::size_t c_grade = header.require("grade");
  const auto c_time = header.find("submitted_at");

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "grade file line " + std::to_string(row.line);
    auto field = [&](std::size_t col) -> const std::string& {
      static const std::string empty;
      return col < row.fields.size() ? row.fields[col] : empty;
    };
    const std::string& email = field(c_email);
    if (corpus != nullptr && corpus->find(email) == nullptr) {
      throw Error(ErrorCode::kUnknownReference,
                  where + ": unknown email_id '" + email + "'");
    }
    const std::string& grade_text = field(c_grade);
    int grade = 0;
    const auto [end, ec] = std::from_chars(
        grade_text.data(), grade_text.data() + grade_text.size(), grade);
    if (ec != std::errc() || end != grade_text.data() + grade_text.size()) {
      throw Error(ErrorCode::kParse,
                  where + ": grade '" + grade_text + "' is not an integer");
    }
    std::optional<std::string> submitted_at;
    if (c_time && !field(*c_time).empty()) submitted_at = field(*c_time);
    try {
      matrix.add(email, field(c_construct), field(c_grader), grade,
                 std::move(submitted_at));
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
  }
  return matrix;
}

std::string export_grades(const GradeMatrix& matrix) {
  std::string out(kGradeFileHeader);
  out.push_back('\n');
  for (const auto& [key, grades] : matrix.cells()) {
    for (const auto& g : grades) {
      out += csv::join({key.email_id, matrix.construct_id(key.construct),
                        g.grader_id, std::to_string(g.grade),
                        g.submitted_at.value_or("")});
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace sophgrade
