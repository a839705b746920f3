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

#include "sophgrade/agreement.hpp"

#include <cmath>
#include <span>

#include "json.hpp"
#include "sophgrade/error.hpp"
#include "sophgrade/kernels.hpp"

namespace sophgrade {

AlphaInput build_alpha_input(const GradeMatrix& matrix, const ValidityMask& mask,
                             Family family) {
  AlphaInput input;
  input.family = family;
  input.value_count = matrix.catalog().scale(family).max + 1;
  for (const auto& [key, grades] : matrix.cells()) {
    if (matrix.family(key.construct) != family) continue;
    const auto* excluded = mask.excluded(key);
    std::vector<int> values;
    for (const auto& g : grades) {
      if (excluded != nullptr && excluded->contains(g.grader_id)) continue;
      values.push_back(g.grade);
    }
    input.items.push_back(std::move(values));
  }
  return input;
}

AlphaWeights AlphaWeights::identity(int value_count) {
  if (value_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "weights need at least one value");
  }
  std::vector<double> w(static_cast<std::size_t>(value_count * value_count), 0.0);
  for (int v = 0; v < value_count; ++v) {
    w[static_cast<std::size_t>(v * value_count + v)] = 1.0;
  }
  return AlphaWeights(value_count, std::move(w));
}

std::string_view alpha_band_name(AlphaBand band) {
  switch (band) {
    case AlphaBand::kAbsoluteDisagreement: return "AbsoluteDisagreement";
    case AlphaBand::kDisagreement: return "Disagreement";
    case AlphaBand::kUnreliable: return "Unreliable";
    case AlphaBand::kAcceptable: return "Acceptable";
    case AlphaBand::kHighlyReliable: return "HighlyReliable";
    case AlphaBand::kPerfect: return "Perfect";
  }
  return "?";
}

AlphaBand interpret_alpha(double alpha) {
  if (std::isnan(alpha) || alpha < -1.0 || alpha > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "alpha " + std::to_string(alpha) + " outside [-1, 1]");
  }
  if (alpha == -1.0) return AlphaBand::kAbsoluteDisagreement;
  if (alpha < 0.0) return AlphaBand::kDisagreement;
  if (alpha < 0.6) return AlphaBand::kUnreliable;
  if (alpha < 0.8) return AlphaBand::kAcceptable;
  if (alpha < 1.0) return AlphaBand::kHighlyReliable;
  return AlphaBand::kPerfect;
}

AlphaResult compute_alpha(const AlphaInput& input, const AlphaWeights& weights) {
  const int V = input.value_count;
  if (weights.size() != V) {
    throw Error(ErrorCode::kInvalidArgument, "weight matrix size mismatch");
  }
  const auto width = static_cast<std::size_t>(V);

  // Agreement table T over the counted items, row-major N x |V|.
  std::vector<double> table;
  std::vector<double> row_total;  // T-bar_{k,i}
  AlphaResult result;
  result.family = input.family;
  for (const auto& item : input.items) {
    if (item.size() < 2) {
      ++result.items_skipped;
      continue;
    }
    const std::size_t base = table.size();
    table.resize(base + width, 0.0);
    for (int v : item) {
      if (v < 0 || v >= V) {
        throw Error(ErrorCode::kOutOfScale,
                    "grade " + std::to_string(v) + " outside value domain");
      }
      table[base + static_cast<std::size_t>(v)] += 1.0;
    }
    row_total.push_back(static_cast<double>(item.size()));
  }
  const std::size_t n_items = row_total.size();
  if (n_items == 0) {
    throw Error(ErrorCode::kInsufficientData,
                "no item with at least two valid grades");
  }
  result.items_used = n_items;

  // Pairable values N * T-bar, accumulated exactly as an integer count.
  const double pairable = kernels::sum(row_total);
  result.t_bar = pairable / static_cast<double>(n_items);

  // pi_v = T-hat_v / T-bar.
  std::vector<double> column(width, 0.0);
  for (std::size_t u = 0; u < n_items; ++u) {
    for (std::size_t v = 0; v < width; ++v) column[v] += table[u * width + v];
  }
  result.pi.resize(width);
  for (std::size_t v = 0; v < width; ++v) result.pi[v] = column[v] / pairable;

  // p'_a = mean_u sum_v T(T' - 1) / (T-bar (T-bar_u - 1)); summing the
  // per-item terms before the single division by N * T-bar keeps unanimous
  // data exactly at 1.
  std::vector<double> adjusted(width);
  double agreement = 0.0;
  for (std::size_t u = 0; u < n_items; ++u) {
    const std::span<const double> row(table.data() + u * width, width);
    for (int v = 0; v < V; ++v) {
      double acc = 0.0;
      for (int w = 0; w < V; ++w) acc += weights.at(v, w) * row[static_cast<std::size_t>(w)];
      adjusted[static_cast<std::size_t>(v)] = acc;
    }
    const double pairs = kernels::dot(row, adjusted) - kernels::sum(row);
    agreement += pairs / (row_total[u] - 1.0);
  }
  result.p_a_prime = agreement / pairable;

  const double epsilon = 1.0 / pairable;
  result.p_a = result.p_a_prime + epsilon * (1.0 - result.p_a_prime);

  std::vector<double> weighted_pi(width);
  for (int v = 0; v < V; ++v) {
    double acc = 0.0;
    for (int w = 0; w < V; ++w) acc += weights.at(v, w) * result.pi[static_cast<std::size_t>(w)];
    weighted_pi[static_cast<std::size_t>(v)] = acc;
  }
  result.p_e = kernels::dot(result.pi, weighted_pi);

  if (std::abs(1.0 - result.p_e) < 1e-15) {
    throw Error(ErrorCode::kDegenerate,
                "degenerate: agreement undefined (every grade has one value)");
  }
  result.alpha = (result.p_a - result.p_e) / (1.0 - result.p_e);
  result.band = interpret_alpha(result.alpha);
  return result;
}

AlphaResult compute_alpha(const AlphaInput& input) {
  return compute_alpha(input, AlphaWeights::identity(input.value_count));
}

AlphaResult compute_alpha(const GradeMatrix& matrix, const ValidityMask& mask,
                          Family family) {
  return compute_alpha(build_alpha_input(matrix, mask, family));
}

double alpha_oracle(const AlphaInput& input) {
  const auto V = static_cast<std::size_t>(input.value_count);
  // coincidence[c][k]: ordered pairs of values (c, k) from distinct graders
  // of the same item, each item's pairs weighted by 1 / (m_u - 1).
  std::vector<std::vector<double>> coincidence(V, std::vector<double>(V, 0.0));
  bool any = false;
  for (const auto& item : input.items) {
    const std::size_t m = item.size();
    if (m < 2) continue;
    any = true;
    for (int v : item) {
      if (v < 0 || static_cast<std::size_t>(v) >= V) {
        throw Error(ErrorCode::kOutOfScale,
                    "grade " + std::to_string(v) + " outside value domain");
      }
    }
    const double w = 1.0 / static_cast<double>(m - 1);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        if (a != b) {
          coincidence[static_cast<std::size_t>(item[a])]
                     [static_cast<std::size_t>(item[b])] += w;
        }
      }
    }
  }
  if (!any) {
    throw Error(ErrorCode::kInsufficientData,
                "no item with at least two valid grades");
  }
  std::vector<double> marginal(V, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < V; ++c) {
    for (std::size_t k = 0; k < V; ++k) marginal[c] += coincidence[c][k];
    n += marginal[c];
  }
  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < V; ++c) {
    for (std::size_t k = 0; k < V; ++k) {
      if (c == k) continue;
      observed += coincidence[c][k];
      expected += marginal[c] * marginal[k];
    }
  }
  const double d_o = observed / n;
  const double d_e = expected / (n * (n - 1.0));
  if (d_e == 0.0) {
    throw Error(ErrorCode::kDegenerate,
                "degenerate: agreement undefined (every grade has one value)");
  }
  return 1.0 - d_o / d_e;
}

double alpha_oracle(const GradeMatrix& matrix, const ValidityMask& mask,
                    Family family) {
  return alpha_oracle(build_alpha_input(matrix, mask, family));
}

std::string alpha_result_json(const AlphaResult& r) {
  using nlohmann::json;
  json doc;
  doc["family"] = family_name(r.family);
  doc["alpha"] = r.alpha;
  doc["band"] = alpha_band_name(r.band);
  doc["p_a"] = r.p_a;
  doc["p_a_prime"] = r.p_a_prime;
  doc["p_e"] = r.p_e;
  doc["t_bar"] = r.t_bar;
  doc["pi"] = r.pi;
  doc["items_used"] = r.items_used;
  doc["items_skipped"] = r.items_skipped;
  return doc.dump(2) + "\n";
}

}  // namespace sophgrade
