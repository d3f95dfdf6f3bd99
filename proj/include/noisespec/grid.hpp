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

#include <cstddef>

namespace noisespec {

/// Uniform angular-frequency grid on [0, max] with `size` samples.
class FrequencyGrid {
 public:
  FrequencyGrid(double max, std::size_t size);

  /// Smallest grid on [0, max] whose spacing does not exceed `max_step`.
  static FrequencyGrid with_max_step(double max, double max_step);

  double max() const noexcept { return max_; }
  std::size_t size() const noexcept { return size_; }
  double step() const noexcept { return max_ / static_cast<double>(size_ - 1); }
  double operator[](std::size_t i) const noexcept {
    return static_cast<double>(i) * step();
  }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  double max_;
  std::size_t size_;
};

}  // namespace noisespec
