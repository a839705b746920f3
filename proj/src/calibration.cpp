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

#include "sophgrade/calibration.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "sophgrade/error.hpp"

namespace sophgrade {

namespace {

constexpr std::string_view kPhaseNames[] = {"DesigningRules", "Priming", "Testing",
                                            "Evaluation", "Resolution", "Grading"};
constexpr std::string_view kActionNames[] = {"ReturnToPriming", "ReviseRules",
                                             "ProceedToGrading"};

void check_alpha(double a, const char* what) {
  if (std::isnan(a) || a < -1.0 || a > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must lie in [-1, 1]");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string_view phase_name(Phase phase) {
  return kPhaseNames[static_cast<int>(phase)];
}

std::string_view action_name(Action action) {
  return kActionNames[static_cast<int>(action)];
}

Phase parse_phase(std::string_view name) {
  for (int i = 0; i < 6; ++i) {
    if (kPhaseNames[i] == name) return static_cast<Phase>(i);
  }
  throw Error(ErrorCode::kParse, "unknown phase '" + std::string(name) + "'");
}

Action parse_action(std::string_view name) {
  for (int i = 0; i < 3; ++i) {
    if (kActionNames[i] == name) return static_cast<Action>(i);
  }
  throw Error(ErrorCode::kParse, "unknown action '" + std::string(name) + "'");
}

CalibrationDecision evaluate_round(double alpha_before,
                                   std::optional<double> alpha_after_outliers,
                                   const CalibrationConfig& config) {
  check_alpha(alpha_before, "alpha_before");
  if (alpha_after_outliers) check_alpha(*alpha_after_outliers, "alpha_after_outliers");

  if (alpha_before < config.retrain_below) {
    return {Action::kReturnToPriming,
            "alpha " + fmt(alpha_before) + " below " + fmt(config.retrain_below)};
  }
  if (alpha_before >= config.proceed_at) {
    return {Action::kProceedToGrading,
            "alpha " + fmt(alpha_before) + " at or above " + fmt(config.proceed_at)};
  }
  if (!alpha_after_outliers) {
    throw Error(ErrorCode::kInvalidArgument, "outlier-elimination trial required");
  }
  const double after = *alpha_after_outliers;
  const double delta = after - alpha_before;
  // Tolerance keeps 0.75 -> 0.80 from failing on representation error.
  if (delta < config.significant_gain - 1e-12) {
    return {Action::kReturnToPriming, "gain " + fmt(delta) + " after outlier removal below " +
                                          fmt(config.significant_gain)};
  }
  const std::string gain = "gain " + fmt(delta) + " after outlier removal";
  switch (config.mid_band) {
    case MidBandPolicy::kProceed:
      return {Action::kProceedToGrading, gain};
    case MidBandPolicy::kReviseRules:
      return {Action::kReviseRules, gain};
    case MidBandPolicy::kByAlphaAfter:
      break;
  }
  if (after >= config.proceed_at) {
    return {Action::kProceedToGrading, gain + ", alpha " + fmt(after) + " reaches " +
                                           fmt(config.proceed_at)};
  }
  return {Action::kReviseRules, gain + ", alpha " + fmt(after) + " still below " +
                                    fmt(config.proceed_at)};
}

CalibrationState advance(const CalibrationState& state) {
  CalibrationState next = state;
  switch (state.phase) {
    case Phase::kDesigningRules: next.phase = Phase::kPriming; break;
    case Phase::kPriming: next.phase = Phase::kTesting; break;
    case Phase::kTesting: next.phase = Phase::kEvaluation; break;
    case Phase::kEvaluation: next.phase = Phase::kResolution; break;
    case Phase::kResolution:
      throw Error(ErrorCode::kConflict, "Resolution requires a decision");
    case Phase::kGrading:
      throw Error(ErrorCode::kConflict, "Grading is terminal");
  }
  return next;
}

CalibrationState advance(const CalibrationState& state, const RoundRecord& outcome) {
  if (state.phase != Phase::kResolution) {
    throw Error(ErrorCode::kConflict, "cannot resolve from phase " +
                                          std::string(phase_name(state.phase)));
  }
  CalibrationState next = state;
  RoundRecord record = outcome;
  record.round = state.round;
  next.history.push_back(std::move(record));
  switch (outcome.decision.action) {
    case Action::kReturnToPriming:
      next.phase = Phase::kPriming;
      ++next.round;
      break;
    case Action::kReviseRules:
      next.phase = Phase::kDesigningRules;
      ++next.round;
      break;
    case Action::kProceedToGrading:
      next.phase = Phase::kGrading;
      break;
  }
  return next;
}

CalibrationState resolve(const CalibrationState& state, double alpha_before,
                         std::optional<double> alpha_after_outliers,
                         const CalibrationConfig& config) {
  RoundRecord r{state.round, alpha_before, alpha_after_outliers,
                evaluate_round(alpha_before, alpha_after_outliers, config)};
  return advance(state, r);
}

std::string serialize_state(const CalibrationState& state) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& r : state.history) {
    history.push_back({{"round", r.round},
                       {"alpha_before", r.alpha_before},
                       {"alpha_after_outliers",
                        r.alpha_after_outliers ? nlohmann::json(*r.alpha_after_outliers)
                                               : nlohmann::json(nullptr)},
                       {"action", action_name(r.decision.action)},
                       {"rationale", r.decision.rationale}});
  }
  nlohmann::json doc = {{"phase", phase_name(state.phase)},
                        {"round", state.round},
                        {"history", history}};
  return doc.dump(2) + "\n";
}

CalibrationState load_state(std::string_view json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    CalibrationState s;
    s.phase = parse_phase(doc.at("phase").get<std::string>());
    s.round = doc.at("round").get<int>();
    if (s.round < 1) throw Error(ErrorCode::kSchema, "round must be >= 1");
    for (const auto& h : doc.at("history")) {
      RoundRecord r;
      r.round = h.at("round").get<int>();
      r.alpha_before = h.at("alpha_before").get<double>();
      if (!h.at("alpha_after_outliers").is_null()) {
        r.alpha_after_outliers = h.at("alpha_after_outliers").get<double>();
      }
      r.decision.action = parse_action(h.at("action").get<std::string>());
      r.decision.rationale = h.value("rationale", "");
      s.history.push_back(std::move(r));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("calibration state: ") + e.what());
  }
}

}  // namespace sophgrade
