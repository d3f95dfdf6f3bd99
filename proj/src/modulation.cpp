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

#include "noisespec/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "noisespec/csv.hpp"
#include "noisespec/error.hpp"

namespace noisespec {

namespace {

void check_time(double t, double duration) {
  if (!(t >= 0.0 && t <= duration)) {
    fail(ErrorCode::kRange, "time " + format_number(t) + " outside [0, " +
                                format_number(duration) + "]");
  }
}

void check_protocol_args(int k, int count, double omega_max, double duration) {
  if (count < 1 || k < 1 || k > count) {
    fail(ErrorCode::kInvalidArgument, "filter index must satisfy 1 <= k <= K");
  }
  if (!(omega_max > 0.0)) fail(ErrorCode::kInvalidArgument, "omega_max must be positive");
  if (!(duration > 0.0)) fail(ErrorCode::kInvalidArgument, "duration must be positive");
}

}  // namespace

PulseSequence::PulseSequence(std::vector<double> switch_times, double duration,
                             int initial_sign)
    : switch_times_(std::move(switch_times)),
      duration_(duration),
      initial_sign_(initial_sign) {
  if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
    fail(ErrorCode::kInvalidArgument, "pulse sequence duration must be positive");
  }
  if (initial_sign_ != 1 && initial_sign_ != -1) {
    fail(ErrorCode::kInvalidArgument, "initial sign must be +1 or -1");
  }
  double previous = 0.0;
  for (double t : switch_times_) {
    if (!(t > previous) || !(t < duration_)) {
      fail(ErrorCode::kInvalidArgument,
           "switch times must be strictly increasing inside (0, T)");
    }
    previous = t;
  }
}

int PulseSequence::level(double t) const {
  check_time(t, duration_);
  const auto flips =
      std::upper_bound(switch_times_.begin(), switch_times_.end(), t) - switch_times_.begin();
  return (flips % 2 == 0) ? initial_sign_ : -initial_sign_;
}

std::vector<Segment> PulseSequence::segments() const {
  std::vector<Segment> out;
  out.reserve(switch_times_.size() + 1);
  double begin = 0.0;
  int level = initial_sign_;
  for (double t : switch_times_) {
    out.push_back({begin, t, level});
    begin = t;
    level = -level;
  }
  out.push_back({begin, duration_, level});
  return out;
}

ModulationSet::ModulationSet(std::vector<PulseSequence> sequences)
    : sequences_(std::move(sequences)) {
  if (sequences_.empty()) {
    fail(ErrorCode::kInvalidArgument, "modulation set needs at least one qubit");
  }
  for (const auto& s : sequences_) {
    if (s.duration() != sequences_.front().duration()) {
      fail(ErrorCode::kInvalidArgument, "all qubits of a modulation set share one duration");
    }
  }
}

ModulationSet::ModulationSet(PulseSequence single)
    : sequences_{std::move(single)} {}

int ModulationSet::level(double t) const {
  int sum = 0;
  for (const auto& s : sequences_) sum += s.level(t);
  return sum;
}

std::vector<Segment> ModulationSet::segments() const {
  if (sequences_.size() == 1) return sequences_.front().segments();
  std::vector<double> cuts;
  for (const auto& s : sequences_) {
    cuts.insert(cuts.end(), s.switch_times().begin(), s.switch_times().end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Segment> out;
  std::vector<std::size_t> cursor(sequences_.size(), 0);
  std::vector<int> levels(sequences_.size());
  for (std::size_t q = 0; q < sequences_.size(); ++q) levels[q] = sequences_[q].initial_sign();
  auto total = [&] {
    int s = 0;
    for (int l : levels) s += l;
    return s;
  };
  double begin = 0.0;
  for (double t : cuts) {
    const int before = total();
    for (std::size_t q = 0; q < sequences_.size(); ++q) {
      const auto& st = sequences_[q].switch_times();
      while (cursor[q] < st.size() && st[cursor[q]] == t) {
        levels[q] = -levels[q];
        ++cursor[q];
      }
    }
    if (total() != before) {
      out.push_back({begin, t, before});
      begin = t;
    }
  }
  out.push_back({begin, duration(), total()});
  return out;
}

PulseSequence fo_sequence(int k, int count, double omega_max, double duration) {
  check_protocol_args(k, count, omega_max, duration);
  const double omega = omega_max * (k - 1) / count;
  std::vector<double> switches;
  if (omega > 0.0) {
    for (int n = 0;; ++n) {
      const double t = (std::numbers::pi / 2.0 + n * std::numbers::pi) / omega;
      if (t >= duration) break;
      switches.push_back(t);
    }
  }
  return PulseSequence(std::move(switches), duration);
}

PulseSequence as_sequence(int k, int count, double omega_max, double duration) {
  check_protocol_args(k, count, omega_max, duration);
  const double omega = omega_max * k / count;
  std::vector<double> switches;
  for (int n = 1;; ++n) {
    const double t = n * std::numbers::pi / omega;
    if (t >= duration) break;
    switches.push_back(t);
  }
  return PulseSequence(std::move(switches), duration);
}

ModulationSet staircase_split(double omega, int qubits, double duration) {
  if (qubits < 1) fail(ErrorCode::kInvalidArgument, "qubit count must be >= 1");
  if (!(omega >= 0.0)) fail(ErrorCode::kInvalidArgument, "target frequency must be >= 0");
  if (!(duration > 0.0)) fail(ErrorCode::kInvalidArgument, "duration must be positive");
  std::vector<PulseSequence> sequences;
  sequences.reserve(qubits);
  const double period = 2.0 * std::numbers::pi;
  for (int j = 1; j <= qubits; ++j) {
    std::vector<double> switches;
    if (omega > 0.0) {
      const double midpoint = static_cast<double>(qubits - 2 * j + 1) / qubits;
      const double theta = std::acos(midpoint);
      for (int n = 0;; ++n) {
        const double down = (theta + period * n) / omega;
        if (down >= duration) break;
        switches.push_back(down);
        const double up = (period * (n + 1) - theta) / omega;
        if (up >= duration) break;
        switches.push_back(up);
      }
    }
    sequences.emplace_back(std::move(switches), duration);
  }
  return ModulationSet(std::move(sequences));
}

ContinuousModulation::ContinuousModulation(double duration, double offset, double ramp,
                                           std::vector<PhaseTerm> terms)
    : duration_(duration), offset_(offset), ramp_(ramp), terms_(std::move(terms)) {
  if (!(duration_ > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "continuous modulation duration must be positive");
  }
}

double ContinuousModulation::phase(double t) const {
  double phi = offset_ + ramp_ * t;
  for (const auto& term : terms_) {
    phi += term.cos_coeff * std::cos(term.frequency * t) +
           term.sin_coeff * std::sin(term.frequency * t);
  }
  return phi;
}

ContinuousModulation::Value ContinuousModulation::operator()(double t) const {
  check_time(t, duration_);
  const double phi = phase(t);
  return {std::cos(phi), std::sin(phi)};
}

double ContinuousModulation::max_phase_rate() const {
  double rate = std::abs(ramp_);
  for (const auto& term : terms_) {
    rate += std::abs(term.frequency) * (std::abs(term.cos_coeff) + std::abs(term.sin_coeff));
  }
  return rate;
}

void write_switch_csv(std::ostream& out, const ModulationSet& set) {
  CsvWriter csv(out);
  csv.meta("duration", set.duration());
  csv.meta("qubits", static_cast<double>(set.qubit_count()));
  csv.header({"qubit", "switch_time"});
  for (std::size_t q = 0; q < set.qubit_count(); ++q) {
    for (double t : set.sequences()[q].switch_times()) {
      csv.raw_row({std::to_string(q + 1), format_number(t, 17)});
    }
  }
}

}  // namespace noisespec
