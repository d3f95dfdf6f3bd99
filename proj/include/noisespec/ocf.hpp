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
#include <vector>

#include "noisespec/filter.hpp"
#include "noisespec/spectra.hpp"

namespace noisespec {

/// How filter energy above the cutoff enters the objective.
enum class OutOfBand {
  kPenalty,   // xi minus weight * ||S||_c * (fraction of filter energy above cutoff)
  kTruncate,  // overlap integral stops at the cutoff, no penalty
};

struct OcfProblem {
  SpectralDensity target;
  int qubits = 1;            // 0 selects a continuous phase modulation
  double duration = 5.0;
  double cutoff = 10.0;
  OutOfBand out_of_band = OutOfBand::kPenalty;
  double penalty_weight = 1.0;
  int superiterations = 10;
  int inner_evaluations = 150;
  int basis_size = 4;        // random frequencies per superiteration
  double grid_step = 0.01;
  double grid_max = 0.0;     // 0 selects 3 * cutoff
  std::uint64_t seed = 1;

  bool continuous() const noexcept { return qubits == 0; }
  FrequencyGrid grid() const;
  void validate() const;
};

struct ObjectiveValue {
  double xi = 0.0;         // int S F / ||F||_c
  double fidelity = 0.0;   // xi / ||S||_c
  double objective = 0.0;  // xi, less the out-of-band penalty when enabled
  double out_of_band_fraction = 0.0;
};

/// Evaluates the filter objective. Throws kUndefinedObjective for a filter
/// with zero norm on [0, cutoff].
ObjectiveValue xi_objective(const FilterFunction& filter, const SpectralDensity& target,
                            double cutoff, OutOfBand mode, double penalty_weight);

struct OcfSolution {
  Modulation modulation;
  ObjectiveValue value;
  int evaluations = 0;
  std::vector<double> trace;  // best objective before and after each superiteration
};

/// dCRAB over per-qubit switch times, warped by random trigonometric bases.
OcfSolution optimize_discrete(const OcfProblem& problem);

/// dCRAB over the phase of a continuous modulation.
OcfSolution optimize_continuous(const OcfProblem& problem);

/// Dispatches on problem.continuous().
OcfSolution optimize_filter(const OcfProblem& problem);

/// Starting point of the discrete search: the staircase at the target's
/// dominant in-band peak.
ModulationSet initial_guess(const OcfProblem& problem);

/// || F / ||F||_c - S / ||S||_c ||_c
double alignment_residual(const FilterFunction& filter, const SpectralDensity& target,
                          double cutoff);

}  // namespace noisespec
