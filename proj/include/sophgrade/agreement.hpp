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

#ifndef SOPHGRADE_AGREEMENT_HPP_
#define SOPHGRADE_AGREEMENT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sophgrade/grades.hpp"
#include "sophgrade/outlier.hpp"

namespace sophgrade {

// One family's items. Each item is a (email, construct) cell holding the
// present, non-excluded grades; every grade lies in [0, value_count).
struct AlphaInput {
  Family family = Family::kPTech;
  int value_count = 0;  // |V|
  std::vector<std::vector<int>> items;
};

// Cells of the family's selected constructs, minus masked graders.
AlphaInput build_alpha_input(const GradeMatrix& matrix, const ValidityMask& mask,
                             Family family);

// Similarity between grade categories. Only identity weights (nominal
// agreement) are offered.
class AlphaWeights {
 public:
  static AlphaWeights identity(int value_count);

  int size() const { return size_; }
  double at(int v, int w) const {
    return values_[static_cast<std::size_t>(v * size_ + w)];
  }

 private:
  AlphaWeights(int size, std::vector<double> values)
      : size_(size), values_(std::move(values)) {}
  int size_;
  std::vector<double> values_;
};

enum class AlphaBand {
  kAbsoluteDisagreement,
  kDisagreement,
  kUnreliable,
  kAcceptable,
  kHighlyReliable,
  kPerfect,
};

std::string_view alpha_band_name(AlphaBand band);

// Throws Error(kInvalidArgument) outside [-1, 1] or for NaN.
AlphaBand interpret_alpha(double alpha);

struct AlphaResult {
  Family family = Family::kPTech;
  double alpha = 0.0;
  double p_a = 0.0;
  double p_a_prime = 0.0;  // mean per-item agreement before normalization
  double p_e = 0.0;
  double t_bar = 0.0;      // mean valid graders per counted item
  std::vector<double> pi;  // pi[v], sums to 1
  std::size_t items_used = 0;
  std::size_t items_skipped = 0;  // fewer than two valid grades
  AlphaBand band = AlphaBand::kUnreliable;
};

// Agreement-table route: T[u][v] counts, T-bar, pi_v, T' = T x W, p'_a,
// normalized p_a, p_e = pi^T W pi, alpha = (p_a - p_e) / (1 - p_e).
// Items with fewer than two valid grades are skipped. Throws
// Error(kInsufficientData) when no item remains and Error(kDegenerate)
// when p_e = 1.
AlphaResult compute_alpha(const AlphaInput& input,
                          const AlphaWeights& weights);
AlphaResult compute_alpha(const AlphaInput& input);
AlphaResult compute_alpha(const GradeMatrix& matrix, const ValidityMask& mask,
                          Family family);

// Coincidence-matrix route for nominal data: 1 - D_o / D_e. Shares no code
// with compute_alpha; same error contract.
double alpha_oracle(const AlphaInput& input);
double alpha_oracle(const GradeMatrix& matrix, const ValidityMask& mask,
                    Family family);

// All intermediates, for audit.
std::string alpha_result_json(const AlphaResult& result);

}  // namespace sophgrade

#endif  // SOPHGRADE_AGREEMENT_HPP_
