/*
 * Copyright 2026 The odflow Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ODFLOW_ERROR_HPP_
#define ODFLOW_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace odflow {

// Machine-readable failure categories. The string form is what the HTTP API
// reports in its {code, message} error bodies.
enum class ErrorCode {
  kParse,
  kIntegrity,
  kEmptyInput,
  kLookup,
  kInvalidArgument,
  kEmptySelection,
  kMultiplicity,
  kSingleton,
  kNormalization,
  kSolverConvergence,
  kIo,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kIntegrity: return "integrity_error";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kLookup: return "not_found";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kEmptySelection: return "empty_selection";
    case ErrorCode::kMultiplicity: return "disconnected_graph";
    case ErrorCode::kSingleton: return "singleton_graph";
    case ErrorCode::kNormalization: return "not_normalized";
    case ErrorCode::kSolverConvergence: return "solver_convergence";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace odflow

#endif  // ODFLOW_ERROR_HPP_
