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

#include "noisespec/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "noisespec/error.hpp"

namespace noisespec {

namespace {

using cd = std::complex<double>;

cd e1_series(cd z) {
  cd sum = 0.0;
  cd term = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= -z / static_cast<double>(k);
    const cd add = term / static_cast<double>(k);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -std::numbers::egamma - std::log(z) - sum;
}

// exp(z) E1(z) = 1 / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))), modified Lentz.
cd e1_continued_fraction(cd z) {
  constexpr double kTiny = 1e-300;
  cd b = z + 1.0;
  cd c = 1.0 / kTiny;
  cd d = 1.0 / b;
  cd h = d;
  for (int i = 1; i < 200000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

std::complex<double> expint_e1(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    fail(ErrorCode::kDomain, "E1 is undefined on the non-positive real axis");
  }
  const double r = std::abs(z);
  if (r <= 4.0 || (z.real() < 0.0 && r <= 12.0)) return e1_series(z);
  return e1_continued_fraction(z) * std::exp(-z);
}

std::complex<double> expint_e1_scaled(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    fail(ErrorCode::kDomain, "E1 is undefined on the non-positive real axis");
  }
  const double r = std::abs(z);
  if (r <= 4.0 || (z.real() < 0.0 && r <= 12.0)) return e1_series(z) * std::exp(z);
  return e1_continued_fraction(z);
}

double sine_integral(double x) {
  if (x < 0.0) return -sine_integral(-x);
  if (x == 0.0) return 0.0;
  if (x < 4.0) {
    double sum = 0.0;
    double power = x;  // x^(2n+1) / (2n+1)!
    for (int n = 0; n < 60; ++n) {
      const double add = power / (2.0 * n + 1.0);
      sum += (n % 2 == 0) ? add : -add;
      if (add < 1e-18) break;
      power *= x * x / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
    }
    return sum;
  }
  return std::numbers::pi / 2.0 + expint_e1(std::complex<double>(0.0, x)).imag();
}

}  // namespace noisespec
