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
#include <iosfwd>
#include <vector>

namespace noisespec {

/// Interval [begin, end) on which the (summed) modulation is constant.
struct Segment {
  double begin;
  double end;
  int level;
};

/// Ideal instantaneous pi-pulse train on [0, T]. The induced modulation y(t)
/// starts at `initial_sign` and flips at every switch time; it is
/// right-continuous, so y(t_j) already carries the flipped sign.
class PulseSequence {
 public:
  PulseSequence(std::vector<double> switch_times, double duration,
                int initial_sign = 1);

  const std::vector<double>& switch_times() const noexcept { return switch_times_; }
  double duration() const noexcept { return duration_; }
  int initial_sign() const noexcept { return initial_sign_; }
  std::size_t pulse_count() const noexcept { return switch_times_.size(); }

  int level(double t) const;
  std::vector<Segment> segments() const;

 private:
  std::vector<double> switch_times_;
  double duration_;
  int initial_sign_;
};

/// Per-qubit pulse trains of an N-qubit GHZ probe sharing one duration. The
/// probe responds to the summed modulation y(t) = sum_j y_j(t).
class ModulationSet {
 public:
  explicit ModulationSet(std::vector<PulseSequence> sequences);
  ModulationSet(PulseSequence single);  // NOLINT(google-explicit-constructor)

  std::size_t qubit_count() const noexcept { return sequences_.size(); }
  double duration() const noexcept { return sequences_.front().duration(); }
  const std::vector<PulseSequence>& sequences() const noexcept { return sequences_; }

  int level(double t) const;

  /// Maximal segments of the summed modulation (adjacent equal levels merged).
  std::vector<Segment> segments() const;

 private:
  std::vector<PulseSequence> sequences_;
};

/// Pulses at the zeros of cos(omega_max (k-1)/K t) in (0, T). k = 1 is free
/// evolution.
PulseSequence fo_sequence(int k, int count, double omega_max, double duration);

/// Pulses at the zeros of sin(omega_max k/K t) in (0, T).
PulseSequence as_sequence(int k, int count, double omega_max, double duration);

/// N-qubit staircase whose summed modulation is the nearest-level
/// quantization of N cos(omega t) onto {-N, -N+2, ..., N}. Qubit j flips
/// whenever N cos(omega t) crosses the midpoint N - 2j + 1.
ModulationSet staircase_split(double omega, int qubits, double duration);

/// phase(t) = offset + ramp t + sum_n [a_n cos(nu_n t) + b_n sin(nu_n t)]
struct PhaseTerm {
  double frequency;
  double cos_coeff;
  double sin_coeff;
};

/// Continuous control with y(t) = cos phase(t), z(t) = sin phase(t).
class ContinuousModulation {
 public:
  explicit ContinuousModulation(double duration, double offset = 0.0,
                                double ramp = 0.0,
                                std::vector<PhaseTerm> terms = {});

  double duration() const noexcept { return duration_; }
  double offset() const noexcept { return offset_; }
  double ramp() const noexcept { return ramp_; }
  const std::vector<PhaseTerm>& terms() const noexcept { return terms_; }

  double phase(double t) const;

  struct Value {
    double y;
    double z;
  };
  /// Throws kRange outside [0, T].
  Value operator()(double t) const;

  /// Upper bound on |phase'(t)| over [0, T].
  double max_phase_rate() const;

 private:
  double duration_;
  double offset_;
  double ramp_;
  std::vector<PhaseTerm> terms_;
};

/// One row per switch: qubit,switch_time.
void write_switch_csv(std::ostream& out, const ModulationSet& set);

}  // namespace noisespec
