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
#include <functional>
#include <span>
#include <vector>

namespace noisespec {

/// Recursive pairwise summation. The result depends only on the order of the
/// input, never on how work was scheduled, and the rounding error grows as
/// O(log n) instead of O(n).
double pairwise_sum(std::span<const double> values);

/// Composite trapezoid rule on uniformly spaced samples.
double trapezoid(std::span<const double> samples, double step);

/// Adaptive Simpson quadrature of f on [a, b] with an absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tolerance, int max_depth = 48);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

}  // namespace noisespec
