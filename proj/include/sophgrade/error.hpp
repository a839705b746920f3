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

#ifndef SOPHGRADE_ERROR_HPP_
#define SOPHGRADE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sophgrade {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kSchema,
  kDuplicate,
  kUnknownReference,
  kOutOfScale,
  kNotFound,
  kInsufficientData,
  kDegenerate,
  kIncomplete,
  kWrongEmail,
  kExpired,
  kConflict,
  kIo,
};

// Stable, machine-readable name (used on the wire and in CLI diagnostics).
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(ErrorCode code, const std::string& message, std::vector<std::string> details)
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  // Machine-readable specifics, e.g. the missing construct ids.
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace sophgrade

#endif  // SOPHGRADE_ERROR_HPP_
