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

#include "noisespec/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace noisespec {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const SimplexOptions& options) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  SimplexResult out;
  const std::size_t n = start.size();
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  if (options.max_evaluations <= 0) {
    out.point = std::move(start);
    return out;
  }
  out.value = eval(start);
  out.point = start;
  if (n == 0 || evals >= options.max_evaluations) {
    out.evaluations = evals;
    return out;
  }

  std::vector<std::vector<double>> simplex{start};
  std::vector<double> values{out.value};
  for (std::size_t i = 0; i < n && evals < options.max_evaluations; ++i) {
    auto v = start;
    v[i] += options.initial_step;
    values.push_back(eval(v));
    simplex.push_back(std::move(v));
  }

  std::vector<std::size_t> order(simplex.size());
  while (simplex.size() == n + 1 && evals < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    if (values[worst] - values[best] <= options.tolerance) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i : order) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / static_cast<double>(n);
    }
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d) x[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
      return x;
    };

    auto reflected = along(-kReflect);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      if (evals < options.max_evaluations) {
        auto expanded = along(-kExpand);
        const double fe = eval(expanded);
        if (fe < fr) {
          simplex[worst] = std::move(expanded);
          values[worst] = fe;
          continue;
        }
      }
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
      continue;
    }
    if (evals >= options.max_evaluations) break;
    const bool outside = fr < values[worst];
    auto contracted = along(outside ? -kContract : kContract);
    const double fc = eval(contracted);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = fc;
      continue;
    }
    for (std::size_t i : order) {
      if (i == best || evals >= options.max_evaluations) continue;
      for (std::size_t d = 0; d < n; ++d) {
        simplex[i][d] = simplex[best][d] + kShrink * (simplex[i][d] - simplex[best][d]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  for (std::size_t i = 0; i < simplex.size(); ++i) {
    if (values[i] < out.value) {
      out.value = values[i];
      out.point = simplex[i];
    }
  }
  out.evaluations = evals;
  return out;
}

}  // namespace noisespec
