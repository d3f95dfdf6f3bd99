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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "noisespec/modulation.hpp"
#include "noisespec/spectra.hpp"

namespace noisespec {

/// Detector error and probe dephasing applied to every population readout.
struct NoiseModel {
  double max_detector_error = 0.0;  // uniform absolute error bound on p
  double dephasing_rate = 0.0;      // Gamma, adds Gamma T to chi
  std::optional<std::uint64_t> shots;  // binomial sampling when set
  std::uint64_t seed = 0;

  void validate() const;
};

struct MeasurementRecord {
  int filter_index = 0;
  double true_coefficient = 0.0;
  double probability = 0.0;   // measured, clamped to [0, 1]
  double coefficient = 0.0;   // inverted estimate, clamped below at 0
  bool saturated = false;
  std::uint64_t seed = 0;     // stream seed used for this record
  NoiseModel noise;
};

struct Inversion {
  double coefficient = 0.0;
  bool saturated = false;
};

/// p = (1 - exp(-c - Gamma T)) / 2
double survival_probability(double coefficient, double rate, double duration);

/// One noisy readout of filter `filter_index`. Draws come from the stream
/// split_seed(noise.seed, filter_index).
MeasurementRecord measure(double coefficient, const NoiseModel& noise,
                          double duration, int filter_index);

std::vector<MeasurementRecord> measure_all(std::span<const double> coefficients,
                                           const NoiseModel& noise,
                                           double duration);

/// c = -ln(1 - 2p) - Gamma T clamped at 0; saturated once p >= 1/2 - 1e-9.
Inversion invert_probability(double probability, double rate, double duration);

/// e^(c + Gamma T) / c: relative coefficient error per unit detector error.
double relative_error_factor(double coefficient, double rate, double duration);

/// Autocorrelation g(tau) = (1/2pi) int S(|omega|) e^(i omega tau) d omega of
/// an analytic spectrum, in closed form through the exponential integral.
double autocorrelation(const SpectralDensity& spectrum, double tau);

/// Brute-force time-domain decoherence value
///   chi = 4 int_0^T int_0^T y(t') y(t'') g(t' - t'') dt' dt''
///       = 8 int_0^T g(tau) R(tau) dtau
/// with the exact piecewise-linear autocorrelation R of y. Independent of
/// every frequency-domain routine; used to cross-check them.
double chi_time_domain(const ModulationSet& set, const SpectralDensity& spectrum);

/// CSV: k,c,p_meas,c_hat,saturated,seed
void write_records_csv(std::ostream& out, std::span<const MeasurementRecord> records);

}  // namespace noisespec
