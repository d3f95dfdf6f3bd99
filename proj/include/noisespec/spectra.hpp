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

#include <span>
#include <vector>

#include "noisespec/grid.hpp"

namespace noisespec {

class FilterFunction;

/// amplitude / (1 + width_scale * (omega - center)^2)
struct Lorentzian {
  double amplitude = 1.0;
  double center = 0.0;
  double width_scale = 1.0;

  double operator()(double omega) const noexcept;
};

/// One-sided power spectral density S(omega), omega >= 0.
///
/// Either analytic (a mixture of Lorentzians) or sampled on increasing
/// frequencies and linearly interpolated. Both forms carry a global scale S0
/// that multiplies every evaluation.
class SpectralDensity {
 public:
  /// The zero spectrum.
  SpectralDensity() = default;

  static SpectralDensity lorentzian_mixture(std::vector<Lorentzian> components,
                                            double scale = 1.0);
  static SpectralDensity sampled(std::vector<double> frequencies,
                                 std::vector<double> values, double scale = 1.0);

  /// Throws kRange for negative omega or outside a sampled table.
  double operator()(double omega) const;

  /// Even extension S(|omega|) over the whole real line.
  double even_extension(double omega) const { return (*this)(omega < 0 ? -omega : omega); }

  std::vector<double> sample(const FrequencyGrid& grid) const;

  /// Samples on the grid up to `upper`; zero above it and outside a table.
  std::vector<double> sample_until(const FrequencyGrid& grid, double upper) const;

  bool analytic() const noexcept { return !sampled_; }
  double scale() const noexcept { return scale_; }
  const std::vector<Lorentzian>& components() const noexcept { return components_; }
  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  const std::vector<double>& values() const noexcept { return values_; }

  SpectralDensity with_scale(double scale) const;
  SpectralDensity scaled(double factor) const { return with_scale(scale_ * factor); }

  /// a * x + b * y. Analytic pairs merge their components; sampled pairs must
  /// share the same frequency table.
  static SpectralDensity combine(double a, const SpectralDensity& x, double b,
                                 const SpectralDensity& y);

 private:
  std::vector<Lorentzian> components_;
  std::vector<double> frequencies_;
  std::vector<double> values_;
  double scale_ = 1.0;
  bool sampled_ = false;
};

/// S(omega, t) = sin^2(rate t) S1(omega) + cos^2(rate t) S2(omega)
struct CompositeSignal {
  double oscillation_rate = 0.0;
  SpectralDensity first;
  SpectralDensity second;

  double first_weight(double t) const;
  double second_weight(double t) const;
  double operator()(double omega, double t) const;

  /// The spectrum frozen at time t.
  SpectralDensity at(double t) const;
};

/// Scale S0 that brings the median of c_k = int S F_k over [0, upper] to one.
/// The input spectrum is not modified; multiply its scale by the result.
double calibrate_amplitude(const SpectralDensity& spectrum,
                           std::span<const FilterFunction> filters, double upper);

// Reference spectra used throughout the examples and presets.
SpectralDensity single_peak_spectrum(double s0 = 1.0);
SpectralDensity double_peak_spectrum(double s0 = 1.0);
SpectralDensity leakage_spectrum(double s0 = 1.0);

}  // namespace noisespec
