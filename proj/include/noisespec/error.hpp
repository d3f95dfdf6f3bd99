// Copyright 2026 The noisespec Authors
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

namespace noisespec {

enum class ErrorCode {
  kOk = 0,
  kInvalidArgument,
  kRange,
  kCalibrationImpossible,
  kGridMismatch,
  kDomain,
  kUnsupportedOracle,
  kDegenerateBasis,
  kIllConditioned,
  kUndefinedFidelity,
  kEmptyOperator,
  kUndefinedObjective,
  kDegenerateComponents,
  kConfig,
  kIo,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code so the
/// C layer can map it onto a status value without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace noisespec
