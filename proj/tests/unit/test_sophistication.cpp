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

#include <random>

#include "sophgrade/corpus.hpp"
#include "sophgrade/error.hpp"
#include "sophgrade/outlier.hpp"
#include "sophgrade/sophistication.hpp"
#include "synthetic.hpp"

using namespace sophgrade;

namespace {

std::shared_ptr<const ConstructCatalog> catalog() {
  static const auto c = std::make_shared<ConstructCatalog>(default_catalog());
  return c;
}

// Direct mean of every grade, ignoring any mask.
double plain_mean(const GradeMatrix& m, const std::string& email, std::size_t construct) {
  const auto* cell = m.cell({email, construct});
  double s = 0.0;
  for (const auto& g : *cell) s += g.grade;
  return s / static_cast<double>(cell->size());
}

GradeMatrix random_email(std::mt19937_64& rng, const std::string& id, std::size_t graders) {
  GradeMatrix m(catalog());
  for (std::size_t c = 0; c < catalog()->graded_count(); ++c) {
    const auto& k = catalog()->graded(c);
    std::uniform_int_distribution<int> v(0, catalog()->scale(k.family).max);
    for (std::size_t g = 0; g < graders; ++g) m.add(id, k.id, "g" + std::to_string(g), v(rng));
  }
  return m;
}

}  // namespace

TEST(Sophistication, ConstructScoreWithAndWithoutMask) {
  GradeMatrix m(catalog());
  for (auto [g, v] : {std::pair{"g1", 1}, {"g2", 2}, {"g3", 2}, {"g4", 5}}) {
    m.add("E129", "familiarity", g, v);
  }
  const auto all = construct_score(m, {}, "E129", "familiarity");
  EXPECT_DOUBLE_EQ(all.mean, 2.5);
  EXPECT_EQ(all.valid_count, 4u);
  ValidityMask mask;
  mask.exclude({"E129", 8}, "g4");
  const auto kept = construct_score(m, mask, "E129", "familiarity");
  EXPECT_NEAR(kept.mean, 5.0 / 3.0, 1e-15);
  EXPECT_EQ(kept.excluded, (std::set<std::string>{"g4"}));
}

TEST(Sophistication, MissingCellIsInsufficient) {
  GradeMatrix m(catalog());
  m.add("E1", "urgency", "g1", 3);
  ValidityMask mask;
  mask.exclude({"E1", 0}, "g1");
  for (const auto& [mk, construct] :
       {std::pair{&mask, "urgency"}, std::pair{static_cast<ValidityMask*>(nullptr), "reward"}}) {
    try {
      construct_score(m, mk ? *mk : ValidityMask{}, "E1", construct);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
      EXPECT_NE(std::string(e.what()).find("no valid grades"), std::string::npos);
    }
  }
  EXPECT_THROW(construct_score(m, {}, "E1", "priming"), Error);
}

// With nothing excluded, the scores are the plain averages of all grades.
TEST(Sophistication, EmptyMaskIsPlainAverage) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_email(rng, "E1", 1 + trial % 6);
    const auto s = email_sophistication(m, {}, "E1");
    double tech = 0.0, tac = 0.0;
    for (std::size_t c = 0; c < 8; ++c) tech += plain_mean(m, "E1", c);
    for (std::size_t c = 8; c < 15; ++c) tac += plain_mean(m, "E1", c);
    EXPECT_NEAR(s.s_ptech, tech / 8.0, 1e-12);
    EXPECT_NEAR(s.s_ptac, tac / 7.0, 1e-12);
  }
}

TEST(Sophistication, BoundsAndMonotonicity) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string id = "E" + std::to_string(trial);
    const auto m = random_email(rng, id, 4);
    const auto base = email_sophistication(m, {}, id);
    EXPECT_GE(base.s_ptech, 0.0);
    EXPECT_LE(base.s_ptech, 7.0);
    EXPECT_GE(base.s_ptac, 0.0);
    EXPECT_LE(base.s_ptac, 5.0);

    // Raise one grade by one step (if room) and rebuild.
    std::uniform_int_distribution<std::size_t> pick(0, 14);
    const std::size_t target = pick(rng);
    const auto& k = catalog()->graded(target);
    GradeMatrix bumped(catalog());
    bool raised = false;
    for (const auto& [key, cell] : m.cells()) {
      for (const auto& g : cell) {
        int v = g.grade;
        if (!raised && key.construct == target && v < catalog()->scale(k.family).max) {
          ++v;
          raised = true;
        }
        bumped.add(key.email_id, m.construct_id(key.construct), g.grader_id, v);
      }
    }
    const auto after = email_sophistication(bumped, {}, id);
    if (k.family == Family::kPTech) {
      EXPECT_GE(after.s_ptech, base.s_ptech);
      EXPECT_EQ(after.s_ptac, base.s_ptac);
      if (raised) EXPECT_GT(after.s_ptech, base.s_ptech);
    } else {
      EXPECT_GE(after.s_ptac, base.s_ptac);
      EXPECT_EQ(after.s_ptech, base.s_ptech);
      if (raised) EXPECT_GT(after.s_ptac, base.s_ptac);
    }
  }
}

TEST(Sophistication, CohortAndCsv) {
  const auto data = testkit::make_synthetic(default_catalog(), {.emails = 12, .seed = 4});
  const auto corpus = ingest_manifest(data.manifest, 2024);
  const auto m = load_grades(data.grades, catalog(), &corpus);
  const auto rows = cohort_scores(m, apply_outlier_rule(m).mask, corpus);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0].email_id, "E00001");
  EXPECT_EQ(rows[0].construct_means.size(), 15u);
  const auto text = cohort_csv(rows);
  EXPECT_EQ(text.rfind("email_id,email_type,year,s_ptech,s_ptac\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 13);
}

TEST(Sophistication, CohortNamesMissingEmails) {
  GradeMatrix m(catalog());
  m.add("E1", "urgency", "g1", 3);
  m.add("E2", "urgency", "g1", 3);
  const auto corpus = ingest_manifest("email_id,email_type,date\nE1,Spam,2001-01-01\n", 2024);
  try {
    cohort_scores(m, {}, corpus);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownReference);
    EXPECT_NE(std::string(e.what()).find("E2"), std::string::npos);
  }
}
