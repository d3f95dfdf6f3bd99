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

#include "noisespec/pipeline.hpp"

#include <cmath>

#include "noisespec/error.hpp"
#include "noisespec/parallel.hpp"
#include "noisespec/quadrature.hpp"
#include "noisespec/rng.hpp"

namespace noisespec {

FrequencyGrid ProtocolSetup::grid() const {
  const double top = grid_max > 0.0 ? grid_max : 5.0 * omega_max;
  if (grid_points > 0) return FrequencyGrid(top, grid_points);
  return FrequencyGrid::with_max_step(top, grid_step);
}

double ProtocolSetup::integration_limit() const {
  return integration_max > 0.0 ? integration_max : grid().max();
}

double ProtocolSetup::fidelity_top() const {
  return protocol == Protocol::kFo ? cutoff : omega_max;
}

void ProtocolSetup::validate() const {
  if (filter_count < 1) fail(ErrorCode::kInvalidArgument, "filter count must be >= 1");
  if (qubits < 1) fail(ErrorCode::kInvalidArgument, "qubit count must be >= 1");
  if (!(duration > 0.0)) fail(ErrorCode::kInvalidArgument, "duration must be positive");
  if (!(omega_max > 0.0)) fail(ErrorCode::kInvalidArgument, "omega_max must be positive");
  if (!(cutoff > 0.0)) fail(ErrorCode::kInvalidArgument, "cutoff must be positive");
  if (protocol == Protocol::kAs && qubits != 1) {
    fail(ErrorCode::kInvalidArgument, "the AS protocol is defined for single-qubit probes only");
  }
  const FrequencyGrid g = grid();
  if (protocol == Protocol::kFo && cutoff > g.max()) {
    fail(ErrorCode::kRange, "cutoff exceeds the frequency grid");
  }
  if (integration_limit() > g.max() * (1.0 + 1e-12)) {
    fail(ErrorCode::kRange, "integration limit exceeds the frequency grid");
  }
}

std::vector<FilterFunction> protocol_filters(const ProtocolSetup& setup) {
  setup.validate();
  const FrequencyGrid grid = setup.grid();
  const int k_count = setup.filter_count;
  std::vector<FilterFunction> filters;
  filters.reserve(static_cast<std::size_t>(k_count));
  for (int k = 1; k <= k_count; ++k) {
    ModulationSet set = [&]() -> ModulationSet {
      if (setup.protocol == Protocol::kAs) {
        return as_sequence(k, k_count, setup.omega_max, setup.duration);
      }
      if (setup.qubits == 1) return fo_sequence(k, k_count, setup.omega_max, setup.duration);
      const double omega = setup.omega_max * (k - 1) / k_count;
      return staircase_split(omega, setup.qubits, setup.duration);
    }();
    filters.push_back(filter_function(set, grid));
  }
  return filters;
}

PreparedProtocol::PreparedProtocol(ProtocolSetup setup, const SpectralDensity& spectrum,
                                   bool calibrate)
    : setup_(std::move(setup)),
      filters_(std::make_shared<const std::vector<FilterFunction>>(protocol_filters(setup_))) {
  const double upper = setup_.integration_limit();
  amplitude_ = calibrate ? calibrate_amplitude(spectrum, *filters_, upper) : spectrum.scale();
  truth_ = spectrum.with_scale(amplitude_);
  const auto samples = truth_.sample_until(filters_->front().grid(), upper);
  coefficients_.reserve(filters_->size());
  for (const auto& f : *filters_) coefficients_.push_back(signal_overlap(samples, f, upper));
  if (setup_.protocol == Protocol::kFo) {
    fo_ = prepare_fo(filters_, setup_.cutoff,
                     fidelity_points(setup_.fidelity_top(), setup_.filter_count));
  } else {
    as_ = prepare_as(*filters_, setup_.omega_max, setup_.as_method);
  }
}

double PreparedProtocol::effective_rate(double rate) const {
  return setup_.collective_dephasing ? rate * setup_.qubits : rate;
}

ReconstructionResult PreparedProtocol::reconstruct(std::span<const double> coefficients,
                                                   std::span<const bool> saturated) const {
  if (setup_.protocol == Protocol::kFo) {
    return fo_reconstruct(fo_, coefficients, saturated, setup_.retention,
                          setup_.clamp_negative);
  }
  return as_reconstruct(as_, coefficients, saturated);
}

Trial PreparedProtocol::run(const NoiseModel& noise) const {
  NoiseModel seen = noise;
  seen.dephasing_rate = effective_rate(noise.dephasing_rate);
  Trial t;
  t.records = measure_all(coefficients_, seen, setup_.duration);
  std::vector<double> estimates;
  std::vector<char> flags;
  for (const auto& r : t.records) {
    estimates.push_back(r.coefficient);
    flags.push_back(r.saturated ? 1 : 0);
  }
  // std::vector<bool> has no contiguous storage; copy into a plain array.
  std::unique_ptr<bool[]> saturated(new bool[flags.size()]);
  for (std::size_t i = 0; i < flags.size(); ++i) saturated[i] = flags[i] != 0;
  try {
    t.reconstruction = reconstruct(estimates, {saturated.get(), flags.size()});
    std::vector<double> truth(t.reconstruction.point_frequencies.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
      truth[i] = truth_(t.reconstruction.point_frequencies[i]);
    }
    t.fidelity = fidelity(truth, t.reconstruction.point_values);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateBasis && e.code() != ErrorCode::kIllConditioned &&
        e.code() != ErrorCode::kUndefinedFidelity) {
      throw;
    }
    t.failed = true;
    t.failure = e.what();
    t.fidelity = 0.0;
  }
  return t;
}

FidelityStats summarize(std::vector<double> samples, std::size_t failures) {
  FidelityStats s;
  s.failures = failures;
  s.samples = std::move(samples);
  const auto n = s.samples.size();
  if (n == 0) return s;
  s.mean = pairwise_sum(s.samples) / static_cast<double>(n);
  if (n > 1) {
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = (s.samples[i] - s.mean) * (s.samples[i] - s.mean);
    s.standard_error = std::sqrt(pairwise_sum(dev) / static_cast<double>(n - 1) /
                                 static_cast<double>(n));
  }
  return s;
}

std::uint64_t repetition_seed(std::uint64_t master, std::size_t repetition) {
  return split_seed(master, 0x5245500000000000ULL + repetition);
}

FidelityStats repeat_trials(const PreparedProtocol& prepared, const NoiseModel& noise,
                            int repetitions, std::uint64_t master_seed, int workers) {
  const auto n = static_cast<std::size_t>(std::max(0, repetitions));
  std::vector<double> values(n, 0.0);
  std::vector<char> failed(n, 0);
  parallel_for(n, workers, [&](std::size_t r) {
    NoiseModel m = noise;
    m.seed = repetition_seed(master_seed, r);
    const Trial t = prepared.run(m);
    values[r] = t.fidelity;
    failed[r] = t.failed ? 1 : 0;
  });
  std::size_t failures = 0;
  for (char f : failed) failures += f != 0 ? 1 : 0;
  return summarize(std::move(values), failures);
}

ScanResult scan_optimal_time(const ProtocolSetup& base, const SpectralDensity& spectrum,
                             const NoiseModel& noise, std::span<const double> durations,
                             int repetitions, std::uint64_t master_seed, int workers,
                             bool calibrate) {
  if (durations.empty()) fail(ErrorCode::kInvalidArgument, "no candidate durations");
  std::vector<std::unique_ptr<PreparedProtocol>> prepared(durations.size());
  parallel_for(durations.size(), workers, [&](std::size_t i) {
    ProtocolSetup s = base;
    s.duration = durations[i];
    prepared[i] = std::make_unique<PreparedProtocol>(s, spectrum, calibrate);
  });
  const auto reps = static_cast<std::size_t>(std::max(0, repetitions));
  std::vector<double> values(durations.size() * reps, 0.0);
  std::vector<char> failed(values.size(), 0);
  parallel_for(values.size(), workers, [&](std::size_t task) {
    const std::size_t i = task / reps;
    const std::size_t r = task % reps;
    NoiseModel m = noise;
    m.seed = repetition_seed(master_seed, r);
    const Trial t = prepared[i]->run(m);
    values[task] = t.fidelity;
    failed[task] = t.failed ? 1 : 0;
  });
  ScanResult out;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    std::vector<double> v(values.begin() + static_cast<std::ptrdiff_t>(i * reps),
                          values.begin() + static_cast<std::ptrdiff_t>((i + 1) * reps));
    std::size_t failures = 0;
    for (std::size_t r = 0; r < reps; ++r) failures += failed[i * reps + r] != 0 ? 1 : 0;
    out.points.push_back({durations[i], prepared[i]->amplitude(), summarize(std::move(v), failures)});
    if (out.points[i].stats.mean > out.points[out.best].stats.mean) out.best = i;
  }
  return out;
}

}  // namespace noisespec
