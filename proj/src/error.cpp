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

#include "sophgrade/error.hpp"

namespace sophgrade {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kSchema: return "schema_violation";
    case ErrorCode::kDuplicate: return "duplicate";
    case ErrorCode::kUnknownReference: return "unknown_reference";
    case ErrorCode::kOutOfScale: return "out_of_scale";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kIncomplete: return "incomplete_submission";
    case ErrorCode::kWrongEmail: return "wrong_email";
    case ErrorCode::kExpired: return "session_expired";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

}  // namespace sophgrade
