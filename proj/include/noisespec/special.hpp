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

#include <complex>

namespace noisespec {

/// Principal-branch exponential integral E1(z) for complex z off the
/// non-positive real axis.
std::complex<double> expint_e1(std::complex<double> z);

/// exp(z) E1(z), which stays finite where E1 alone would overflow.
std::complex<double> expint_e1_scaled(std::complex<double> z);

/// Sine integral Si(x).
double sine_integral(double x);

}  // namespace noisespec
