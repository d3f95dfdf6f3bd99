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

#include "noisespec/error.hpp"

namespace noisespec {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kRange: return "range error";
    case ErrorCode::kCalibrationImpossible: return "calibration impossible";
    case ErrorCode::kGridMismatch: return "grid mismatch";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kUnsupportedOracle: return "unsupported oracle";
    case ErrorCode::kDegenerateBasis: return "degenerate basis";
    case ErrorCode::kIllConditioned: return "ill-conditioned inversion";
    case ErrorCode::kUndefinedFidelity: return "undefined fidelity";
    case ErrorCode::kEmptyOperator: return "empty operator";
    case ErrorCode::kUndefinedObjective: return "undefined objective";
    case ErrorCode::kDegenerateComponents: return "degenerate components";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace noisespec
