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

#include <functional>
#include <vector>

namespace noisespec {

struct SimplexOptions {
  int max_evaluations = 150;
  double initial_step = 0.1;
  double tolerance = 1e-10;  // stop once the simplex values span less than this
};

struct SimplexResult {
  std::vector<double> point;
  double value = 0.0;
  int evaluations = 0;
};

/// Derivative-free minimisation by reflection, expansion, contraction and
/// shrink steps (Nelder-Mead). The first evaluation is always the start
/// point, so the result is never worse than the start.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const SimplexOptions& options);

}  // namespace noisespec
