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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "noisespec/filter.hpp"
#include "noisespec/probe.hpp"
#include "noisespec/reconstruct.hpp"
#include "noisespec/spectra.hpp"

namespace noisespec {

/// Everything that fixes one filter family and its reconstruction.
struct ProtocolSetup {
  Protocol protocol = Protocol::kFo;
  int filter_count = 20;
  int qubits = 1;
  double duration = 5.0;
  double omega_max = 11.5;
  double cutoff = 10.0;            // FO analysis band [0, cutoff]
  double grid_max = 0.0;           // 0 selects 5 * omega_max
  double grid_step = 0.005;        // upper bound on the spacing
  std::size_t grid_points = 0;     // overrides grid_step when nonzero
  double integration_max = 0.0;    // 0 selects grid_max
  RetentionRule retention = RetentionRule::relative(3e-2);
  AsMethod as_method = AsMethod::kBinned;
  bool clamp_negative = false;
  bool collective_dephasing = true;  // N-qubit GHZ probe dephases at N * rate

  FrequencyGrid grid() const;
  double integration_limit() const;
  /// Upper end of the fidelity points: cutoff for FO, omega_max for AS.
  double fidelity_top() const;
  void validate() const;
};

std::vector<FilterFunction> protocol_filters(const ProtocolSetup& setup);

struct Trial {
  std::vector<MeasurementRecord> records;
  ReconstructionResult reconstruction;
  double fidelity = 0.0;
  bool failed = false;  // reconstruction impossible; fidelity counted as 0
  std::string failure;
};

/// Filters, calibrated truth and exact coefficients for one setup. Immutable
/// after construction and safe to share between worker threads.
class PreparedProtocol {
 public:
  /// With `calibrate`, the spectrum is rescaled so the median c_k is one.
  PreparedProtocol(ProtocolSetup setup, const SpectralDensity& spectrum, bool calibrate = true);

  const ProtocolSetup& setup() const noexcept { return setup_; }
  const std::vector<FilterFunction>& filters() const noexcept { return *filters_; }
  const SpectralDensity& truth() const noexcept { return truth_; }
  double amplitude() const noexcept { return amplitude_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }

  /// Dephasing rate the probe actually sees for a nominal single-qubit rate.
  double effective_rate(double rate) const;

  ReconstructionResult reconstruct(std::span<const double> coefficients,
                                   std::span<const bool> saturated) const;

  /// One simulated experiment with the streams of noise.seed.
  Trial run(const NoiseModel& noise) const;

 private:
  ProtocolSetup setup_;
  std::shared_ptr<const std::vector<FilterFunction>> filters_;
  SpectralDensity truth_;
  double amplitude_ = 1.0;
  std::vector<double> coefficients_;
  FoInputs fo_;
  AsInputs as_;
};

struct FidelityStats {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t failures = 0;
  std::vector<double> samples;
};

FidelityStats summarize(std::vector<double> samples, std::size_t failures = 0);

/// Seed of repetition r under a master seed.
std::uint64_t repetition_seed(std::uint64_t master, std::size_t repetition);

FidelityStats repeat_trials(const PreparedProtocol& prepared, const NoiseModel& noise,
                            int repetitions, std::uint64_t master_seed, int workers);

struct ScanPoint {
  double duration = 0.0;
  double amplitude = 0.0;
  FidelityStats stats;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  std::size_t best = 0;
  double best_duration() const { return points.at(best).duration; }
};

/// Mean fidelity for each candidate duration, recalibrating the amplitude per
/// duration unless `calibrate` is false. Every duration reuses the same
/// repetition seeds.
ScanResult scan_optimal_time(const ProtocolSetup& base, const SpectralDensity& spectrum,
                             const NoiseModel& noise, std::span<const double> durations,
                             int repetitions, std::uint64_t master_seed, int workers,
                             bool calibrate = true);

}  // namespace noisespec
