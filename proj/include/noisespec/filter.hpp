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
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "noisespec/grid.hpp"
#include "noisespec/modulation.hpp"
#include "noisespec/spectra.hpp"

namespace noisespec {

using Modulation = std::variant<ModulationSet, ContinuousModulation>;

double modulation_duration(const Modulation& modulation);

/// Exact Y(omega) = int_0^T y(t) exp(i omega t) dt of a piecewise-constant
/// modulation. Switches to a three-term series when |omega| T < 1e-6.
std::complex<double> fourier_transform(const ModulationSet& set, double omega);

struct ContinuousTransform {
  std::complex<double> y;
  std::complex<double> z;
};

/// Transforms of y = cos(phase) and z = sin(phase), by composite Simpson
/// refined until successive halvings agree to `tolerance` (absolute).
ContinuousTransform fourier_transform(const ContinuousModulation& modulation,
                                      double omega, double tolerance = -1.0);

/// F(omega) = 4/pi |Y|^2, or 4/pi (|Y|^2 + |Z|^2) for continuous controls.
double filter_value(const Modulation& modulation, double omega);

/// Filter function sampled on a grid, together with the modulation that
/// produced it so it can be re-evaluated exactly anywhere.
class FilterFunction {
 public:
  FilterFunction(FrequencyGrid grid, std::vector<double> values,
                 Modulation generator);

  const FrequencyGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const Modulation& generator() const noexcept { return generator_; }
  double duration() const { return modulation_duration(generator_); }

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double at(double omega) const { return filter_value(generator_, omega); }

 private:
  FrequencyGrid grid_;
  std::vector<double> values_;
  Modulation generator_;
};

FilterFunction filter_function(const Modulation& modulation,
                               const FrequencyGrid& grid);

/// Trapezoid integral of grid samples over [0, upper]; a partial last panel
/// is linearly interpolated. Uses pairwise summation.
double integrate(std::span<const double> samples, const FrequencyGrid& grid,
                 double upper);

/// Same over [lower, upper].
double integrate(std::span<const double> samples, const FrequencyGrid& grid,
                 double lower, double upper);

/// A_kl = int_0^cutoff F_k F_l. Throws kGridMismatch unless all grids agree.
Eigen::MatrixXd overlap_matrix(std::span<const FilterFunction> filters,
                               double cutoff);

/// c = int_0^upper S F, the noiseless decoherence value chi(T).
double signal_overlap(const SpectralDensity& spectrum, const FilterFunction& filter,
                      double upper);
double signal_overlap(std::span<const double> spectrum_samples,
                      const FilterFunction& filter, double upper);

/// (int_0^cutoff f^2)^(1/2)
double continuous_norm(std::span<const double> samples, const FrequencyGrid& grid,
                       double cutoff);
double continuous_norm(const FilterFunction& filter, double cutoff);
double continuous_norm(const SpectralDensity& spectrum, const FrequencyGrid& grid,
                       double cutoff);

/// Upper bound on int_upper^inf F for a pi-pulse modulation: |Y| <= V/omega
/// with V the total variation of y including the jumps at 0 and T.
double tail_bound(const ModulationSet& set, double upper);

/// Exact int_upper^inf F for a pi-pulse modulation, summed in closed form over
/// jump pairs with the sine integral.
double exact_tail(const ModulationSet& set, double upper);

struct ParsevalCheck {
  double band_integral;  // trapezoid over [0, limit]
  double tail;           // analytic remainder beyond limit
  double limit;
  double time_integral;  // 4 int_0^T y^2
  double relative_error;
};

/// Compares int_0^inf F with 4 int y^2. limit defaults to 200/T.
ParsevalCheck parseval_check(const ModulationSet& set, double max_step = 0.005,
                             double limit = -1.0);

}  // namespace noisespec
