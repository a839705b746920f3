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
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sophgrade/agreement.hpp"
#include "sophgrade/error.hpp"
#include "synthetic.hpp"

using namespace sophgrade;

namespace {

AlphaInput input(int values, std::vector<std::vector<int>> items) {
  return AlphaInput{Family::kPTech, values, std::move(items)};
}

ErrorCode code_of(const AlphaInput& in) {
  try {
    compute_alpha(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kIo;
}

}  // namespace

TEST(Alpha, FrozenSmallCases) {
  // Hand-derived: one item (0,0,1) -> alpha 0; (0,1),(1,0) -> -0.5.
  const auto a = input(2, {{0, 0, 1}});
  EXPECT_NEAR(compute_alpha(a).alpha, 0.0, 1e-15);
  EXPECT_NEAR(testkit::brute_force_alpha(a.items), 0.0, 1e-15);
  const auto b = input(2, {{0, 1}, {1, 0}});
  EXPECT_NEAR(compute_alpha(b).alpha, -0.5, 1e-15);
  EXPECT_NEAR(alpha_oracle(b), -0.5, 1e-15);
}

TEST(Alpha, UnanimousIsExactlyOne) {
  const auto r = compute_alpha(input(8, {{0, 0, 0}, {3, 3, 3, 3}, {7, 7}, {1, 1, 1}}));
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_EQ(r.band, AlphaBand::kPerfect);
}

TEST(Alpha, AntitheticalIsNegative) {
  EXPECT_LT(compute_alpha(input(2, {{0, 1}, {1, 0}, {0, 1}, {1, 0}})).alpha, 0.0);
}

TEST(Alpha, DegenerateAndInsufficient) {
  EXPECT_EQ(code_of(input(8, {{2, 2, 2}, {2, 2}})), ErrorCode::kDegenerate);
  EXPECT_EQ(code_of(input(8, {{2}, {}})), ErrorCode::kInsufficientData);
  EXPECT_EQ(code_of(input(8, {})), ErrorCode::kInsufficientData);
  EXPECT_THROW(alpha_oracle(input(8, {{2, 2, 2}})), Error);
}

TEST(Alpha, SkipsSingletonItems) {
  const auto with = compute_alpha(input(3, {{0, 1}, {1, 1, 2}, {2}, {}}));
  const auto without = compute_alpha(input(3, {{0, 1}, {1, 1, 2}}));
  EXPECT_EQ(with.items_skipped, 2u);
  EXPECT_EQ(with.items_used, 2u);
  EXPECT_DOUBLE_EQ(with.alpha, without.alpha);
}

TEST(Alpha, IntermediatesAreConsistent) {
  const auto r = compute_alpha(input(4, {{0, 1, 1}, {2, 2, 3, 3}, {1, 1}}));
  double pi_total = 0.0;
  for (double p : r.pi) pi_total += p;
  EXPECT_NEAR(pi_total, 1.0, 1e-15);
  EXPECT_NEAR(r.t_bar, 3.0, 1e-15);
  EXPECT_NEAR(r.alpha, (r.p_a - r.p_e) / (1.0 - r.p_e), 1e-15);
  EXPECT_NE(alpha_result_json(r).find("\"p_e\""), std::string::npos);
}

TEST(Alpha, MatchesBothOracles) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto in = testkit::random_alpha_input(rng, 10, 40, 8, 0.3);
    double expected;
    try {
      expected = alpha_oracle(in);
    } catch (const Error&) {
      EXPECT_THROW(compute_alpha(in), Error);
      continue;
    }
    ++checked;
    EXPECT_NEAR(compute_alpha(in).alpha, expected, 1e-12);
    EXPECT_NEAR(testkit::brute_force_alpha(in.items), expected, 1e-12);
  }
  EXPECT_GT(checked, 400);
}

TEST(Alpha, GraderOrderInvariant) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto in = testkit::random_alpha_input(rng, 6, 20, 6, 0.1);
    double a;
    try {
      a = compute_alpha(in).alpha;
    } catch (const Error&) {
      continue;
    }
    for (auto& item : in.items) std::shuffle(item.begin(), item.end(), rng);
    std::shuffle(in.items.begin(), in.items.end(), rng);
    EXPECT_NEAR(compute_alpha(in).alpha, a, 1e-12);
  }
}

TEST(Alpha, Bands) {
  EXPECT_EQ(interpret_alpha(0.822), AlphaBand::kHighlyReliable);
  EXPECT_EQ(interpret_alpha(0.768), AlphaBand::kAcceptable);
  EXPECT_EQ(interpret_alpha(-1.0), AlphaBand::kAbsoluteDisagreement);
  EXPECT_EQ(interpret_alpha(-0.2), AlphaBand::kDisagreement);
  EXPECT_EQ(interpret_alpha(0.0), AlphaBand::kUnreliable);
  EXPECT_EQ(interpret_alpha(0.5999), AlphaBand::kUnreliable);
  EXPECT_EQ(interpret_alpha(0.6), AlphaBand::kAcceptable);
  EXPECT_EQ(interpret_alpha(0.8), AlphaBand::kHighlyReliable);
  EXPECT_EQ(interpret_alpha(1.0), AlphaBand::kPerfect);
  EXPECT_THROW(interpret_alpha(1.01), Error);
  EXPECT_THROW(interpret_alpha(std::nan("")), Error);
  EXPECT_EQ(alpha_band_name(AlphaBand::kHighlyReliable), "HighlyReliable");
}

TEST(Alpha, WeightsMustMatch) {
  EXPECT_THROW(compute_alpha(input(3, {{0, 1}}), AlphaWeights::identity(4)), Error);
  const auto w = AlphaWeights::identity(3);
  EXPECT_EQ(w.at(1, 1), 1.0);
  EXPECT_EQ(w.at(0, 2), 0.0);
}

TEST(Alpha, FromMatrixRespectsMask) {
  const auto cat = std::make_shared<ConstructCatalog>(default_catalog());
  GradeMatrix m(cat);
  m.add("E1", "urgency", "a", 1);
  m.add("E1", "urgency", "b", 1);
  m.add("E1", "urgency", "c", 7);
  m.add("E2", "urgency", "a", 3);
  m.add("E2", "urgency", "b", 3);
  m.add("E2", "urgency", "c", 3);
  m.add("E1", "familiarity", "a", 2);  // other family, ignored
  ValidityMask mask;
  mask.exclude({"E1", 0}, "c");
  const auto in = build_alpha_input(m, mask, Family::kPTech);
  EXPECT_EQ(in.value_count, 8);
  ASSERT_EQ(in.items.size(), 2u);
  EXPECT_EQ(compute_alpha(m, mask, Family::kPTech).alpha, 1.0);
  EXPECT_LT(compute_alpha(m, {}, Family::kPTech).alpha, 1.0);
  EXPECT_NEAR(compute_alpha(m, {}, Family::kPTech).alpha, alpha_oracle(m, {}, Family::kPTech),
              1e-12);
}
