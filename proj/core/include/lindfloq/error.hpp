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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lindfloq {

enum class ErrorCode {
  kInvalidInput,
  kInvalidState,
  kNumericalFailure,
  kSingularMap,
  kIntegrationFailure,
  kNoSteadyState,
  kAmbiguousSteadyState,
  kFitFailure,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `diagnostics` carries whatever numbers
// the raising routine had at hand (residuals, last refinement differences).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<double> diagnostics = {});

  ErrorCode code() const noexcept { return code_; }
  const std::vector<double>& diagnostics() const noexcept { return diagnostics_; }

 private:
  ErrorCode code_;
  std::vector<double> diagnostics_;
};

}  // namespace lindfloq
