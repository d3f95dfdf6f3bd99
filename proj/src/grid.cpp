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

#include "noisespec/grid.hpp"

#include <cmath>

#include "noisespec/error.hpp"

namespace noisespec {

FrequencyGrid::FrequencyGrid(double max, std::size_t size) : max_(max), size_(size) {
  if (!(max > 0.0) || !std::isfinite(max)) {
    fail(ErrorCode::kInvalidArgument, "frequency grid needs a positive finite upper end");
  }
  if (size < 2) fail(ErrorCode::kInvalidArgument, "frequency grid needs at least 2 samples");
}

FrequencyGrid FrequencyGrid::with_max_step(double max, double max_step) {
  if (!(max_step > 0.0)) fail(ErrorCode::kInvalidArgument, "grid step must be positive");
  // Round before ceil so that max/max_step landing on an integer up to
  // rounding noise does not add a sample.
  const double panels = std::ceil(std::round(max / max_step * 1e9) / 1e9);
  return FrequencyGrid(max, static_cast<std::size_t>(panels) + 1);
}

}  // namespace noisespec
