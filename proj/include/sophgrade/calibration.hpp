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

#ifndef SOPHGRADE_CALIBRATION_HPP_
#define SOPHGRADE_CALIBRATION_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sophgrade {

enum class Phase { kDesigningRules, kPriming, kTesting, kEvaluation, kResolution, kGrading };

enum class Action { kReturnToPriming, kReviseRules, kProceedToGrading };

std::string_view phase_name(Phase phase);
std::string_view action_name(Action action);
Phase parse_phase(std::string_view name);
Action parse_action(std::string_view name);

// What to do when the mid band improves enough after outlier elimination.
enum class MidBandPolicy {
  kByAlphaAfter,  // proceed if the post-elimination alpha reaches `proceed`
  kProceed,
  kReviseRules,
};

struct CalibrationConfig {
  double significant_gain = 0.05;
  double retrain_below = 0.6;
  double proceed_at = 0.8;
  MidBandPolicy mid_band = MidBandPolicy::kByAlphaAfter;
};

struct CalibrationDecision {
  Action action = Action::kReturnToPriming;
  std::string rationale;
};

// Throws Error(kInvalidArgument) for alphas outside [-1, 1] or NaN, and
// when the mid band is hit without a post-elimination alpha.
CalibrationDecision evaluate_round(double alpha_before,
                                   std::optional<double> alpha_after_outliers,
                                   const CalibrationConfig& config = {});

struct RoundRecord {
  int round = 1;
  double alpha_before = 0.0;
  std::optional<double> alpha_after_outliers;
  CalibrationDecision decision;
};

struct CalibrationState {
  Phase phase = Phase::kDesigningRules;
  int round = 1;
  std::vector<RoundRecord> history;

  bool operator==(const CalibrationState&) const = default;
};

inline bool operator==(const CalibrationDecision& a, const CalibrationDecision& b) {
  return a.action == b.action && a.rationale == b.rationale;
}
inline bool operator==(const RoundRecord& a, const RoundRecord& b) {
  return a.round == b.round && a.alpha_before == b.alpha_before &&
         a.alpha_after_outliers == b.alpha_after_outliers && a.decision == b.decision;
}

// Moves one step along DesigningRules -> Priming -> Testing -> Evaluation
// -> Resolution. Throws Error(kConflict) from Resolution or Grading.
CalibrationState advance(const CalibrationState& state);

// Applies a Resolution decision. Throws Error(kConflict) unless the state
// is in Resolution.
CalibrationState advance(const CalibrationState& state, const RoundRecord& outcome);

// Convenience: evaluates and resolves in one go.
CalibrationState resolve(const CalibrationState& state, double alpha_before,
                         std::optional<double> alpha_after_outliers,
                         const CalibrationConfig& config = {});

std::string serialize_state(const CalibrationState& state);
CalibrationState load_state(std::string_view json_text);

}  // namespace sophgrade

#endif  // SOPHGRADE_CALIBRATION_HPP_
