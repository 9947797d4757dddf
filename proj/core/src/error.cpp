// Copyright 2026 The lindfloq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lindfloq/error.hpp"

namespace lindfloq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kNumericalFailure: return "numerical-failure";
    case ErrorCode::kSingularMap: return "singular-map";
    case ErrorCode::kIntegrationFailure: return "integration-failure";
    case ErrorCode::kNoSteadyState: return "no-steady-state";
    case ErrorCode::kAmbiguousSteadyState: return "ambiguous-steady-state";
    case ErrorCode::kFitFailure: return "fit-failure";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::vector<double> diagnostics)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      diagnostics_(std::move(diagnostics)) {}

}  // namespace lindfloq
