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

#ifndef SOPHGRADE_TAXONOMY_HPP_
#define SOPHGRADE_TAXONOMY_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sophgrade {

// PTech: countable low-level cue. PTac: rated high-level framing.
enum class Family { kPTech, kPTac };

std::string_view family_name(Family family);  // "ptech" / "ptac"
std::optional<Family> parse_family(std::string_view text);

struct GradeScale {
  int min = 0;
  int max = 0;

  bool contains(int grade) const { return grade >= min && grade <= max; }
  int size() const { return max - min + 1; }
  friend bool operator==(const GradeScale&, const GradeScale&) = default;
};

struct Construct {
  std::string id;
  Family family = Family::kPTech;
  std::string name;
  std::string definition;
  std::vector<std::string> cue_examples;
  bool selected = false;

  friend bool operator==(const Construct&, const Construct&) = default;
};

// Immutable once built. Order of `constructs()` is significant: report
// columns and UI layout follow it.
class ConstructCatalog {
 public:
  // Throws Error(kDuplicate) on a repeated id, Error(kSchema) when a scale
  // is malformed or a family has no selected construct.
  ConstructCatalog(std::vector<Construct> constructs, GradeScale ptech_scale,
                   GradeScale ptac_scale);

  const std::vector<Construct>& constructs() const { return constructs_; }
  const GradeScale& ptech_scale() const { return ptech_scale_; }
  const GradeScale& ptac_scale() const { return ptac_scale_; }
  const GradeScale& scale(Family family) const {
    return family == Family::kPTech ? ptech_scale_ : ptac_scale_;
  }

  // The graded constructs: selected PTechs then selected PTacs, each in
  // catalog order. Indices into this list are the "graded index" used by
  // the grade matrix and every report.
  std::size_t graded_count() const { return graded_.size(); }
  const Construct& graded(std::size_t index) const {
    return constructs_[graded_[index]];
  }
  // Graded indices belonging to one family (a contiguous range).
  std::vector<std::size_t> graded_indices(Family family) const;

  std::size_t ptech_count() const { return ptech_count_; }  // ℓ
  std::size_t ptac_count() const { return graded_.size() - ptech_count_; }  // m

  const Construct* find(std::string_view id) const;
  // Position in graded(), or nullopt for unknown / unselected ids.
  std::optional<std::size_t> graded_index(std::string_view id) const;

  friend bool operator==(const ConstructCatalog& a, const ConstructCatalog& b) {
    return a.constructs_ == b.constructs_ && a.ptech_scale_ == b.ptech_scale_ &&
           a.ptac_scale_ == b.ptac_scale_;
  }

 private:
  std::vector<Construct> constructs_;
  GradeScale ptech_scale_;
  GradeScale ptac_scale_;
  std::vector<std::size_t> graded_;  // positions in constructs_
  std::size_t ptech_count_ = 0;
};

// 16 PTechs (8 selected) and 7 PTacs on scales [0,7] and [0,5].
const ConstructCatalog& default_catalog();

// JSON document: {"ptech_scale": {min, max}, "ptac_scale": {min, max},
// "constructs": [{id, family, name, definition, cue_examples, selected}]}.
// Schema errors carry the offending field path, e.g. "constructs[2].family".
ConstructCatalog load_catalog(std::string_view document);
std::string serialize_catalog(const ConstructCatalog& catalog);

// Meaning of each PTac rating, index = grade.
const std::vector<std::string>& ptac_rating_legend();

}  // namespace sophgrade

#endif  // SOPHGRADE_TAXONOMY_HPP_
