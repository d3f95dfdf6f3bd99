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

#include "noisespec/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>

#include <Eigen/Dense>

#include "noisespec/csv.hpp"
#include "noisespec/error.hpp"
#include "noisespec/modulation.hpp"
#include "noisespec/parallel.hpp"
#include "noisespec/rng.hpp"

namespace noisespec {

const char* to_string(TrackingMethod method) {
  return method == TrackingMethod::kFoBlock ? "fo-block" : "ocf-pair";
}

namespace {

void check_options(const TrackingOptions& o, double block) {
  if (!(o.duration > 0.0)) fail(ErrorCode::kInvalidArgument, "filter duration must be positive");
  if (!(o.horizon >= block)) fail(ErrorCode::kRange, "horizon shorter than one sample block");
  o.noise.validate();
}

std::size_t sample_count(double horizon, double block) {
  // Guard against 500 / 50 landing a hair below 10.
  return static_cast<std::size_t>(std::floor(horizon / block * (1.0 + 1e-12)));
}

// Solves the 2x2 system, refusing near-singular matrices.
Eigen::Vector2d solve_pair(const Eigen::Matrix2d& m, const Eigen::Vector2d& rhs) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || std::abs(m.determinant()) <= 1e-12 * scale * scale) {
    fail(ErrorCode::kDegenerateComponents, "signal components cannot be separated");
  }
  return m.partialPivLu().solve(rhs);
}

TrackingSample truth_at(const CompositeSignal& s, double t) {
  TrackingSample out;
  out.time = t;
  out.first_true = s.first_weight(t);
  out.second_true = s.second_weight(t);
  return out;
}

int qubits_of(const FilterFunction& f) {
  if (const auto* set = std::get_if<ModulationSet>(&f.generator())) {
    return static_cast<int>(set->qubit_count());
  }
  return 1;
}

}  // namespace

TrackingRun track_fo(const CompositeSignal& signal, const FoTrackingSetup& setup,
                     const TrackingOptions& options) {
  if (setup.filters < 2) fail(ErrorCode::kInvalidArgument, "an FO block needs at least two filters");
  const double t = options.duration;
  const double block = setup.filters * t;
  check_options(options, block);

  const auto grid = FrequencyGrid::with_max_step(5.0 * setup.omega_max, setup.grid_step);
  auto filters = std::make_shared<std::vector<FilterFunction>>();
  for (int k = 1; k <= setup.filters; ++k) {
    filters->push_back(filter_function(
        ModulationSet({fo_sequence(k, setup.filters, setup.omega_max, t)}), grid));
  }
  const std::size_t n = filters->size();
  std::vector<double> c1(n);
  std::vector<double> c2(n);
  for (std::size_t k = 0; k < n; ++k) {
    c1[k] = signal_overlap(signal.first, (*filters)[k], grid.max());
    c2[k] = signal_overlap(signal.second, (*filters)[k], grid.max());
  }
  const FoInputs inputs = prepare_fo(filters, setup.cutoff, {});

  TrackingRun run;
  run.method = TrackingMethod::kFoBlock;
  run.block_duration = block;
  run.samples.resize(sample_count(options.horizon, block));
  parallel_for(run.samples.size(), options.workers, [&](std::size_t b) {
    const double start = block * static_cast<double>(b);
    TrackingSample& out = run.samples[b];
    out = truth_at(signal, start + 0.5 * block);

    NoiseModel noise = options.noise;
    noise.seed = split_seed(options.noise.seed, b);
    std::vector<double> estimates(n);
    auto saturated = std::make_unique<bool[]>(n);
    std::size_t live = 0;
    for (std::size_t k = 0; k < n; ++k) {
      // Quasi-static: the signal is frozen at this filter's midpoint.
      const double mid = start + (static_cast<double>(k) + 0.5) * t;
      const double c = signal.first_weight(mid) * c1[k] + signal.second_weight(mid) * c2[k];
      const MeasurementRecord r = measure(c, noise, t, static_cast<int>(k) + 1);
      estimates[k] = r.coefficient;
      saturated[k] = r.saturated;
      if (!r.saturated) ++live;
    }
    if (live == 0) {
      out.failed = true;
      return;
    }
    const std::span<const bool> mask(saturated.get(), n);
    // The reconstruction is linear in the coefficients for a fixed rule, so the
    // components are compared after passing through the same operator.
    const auto est = fo_reconstruct(inputs, estimates, mask, setup.retention).grid_values;
    const auto p1 = fo_reconstruct(inputs, c1, mask, setup.retention).grid_values;
    const auto p2 = fo_reconstruct(inputs, c2, mask, setup.retention).grid_values;
    Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
    Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < est.size(); ++i) {
      normal(0, 0) += p1[i] * p1[i];
      normal(0, 1) += p1[i] * p2[i];
      normal(1, 1) += p2[i] * p2[i];
      rhs(0) += p1[i] * est[i];
      rhs(1) += p2[i] * est[i];
    }
    normal(1, 0) = normal(0, 1);
    const Eigen::Vector2d s = solve_pair(normal, rhs);
    out.first = s(0);
    out.second = s(1);
  });
  return run;
}

Eigen::Matrix2d component_overlaps(const CompositeSignal& signal,
                                   std::span<const FilterFunction> pair) {
  if (pair.size() != 2) fail(ErrorCode::kInvalidArgument, "expected exactly two filters");
  if (!(pair[0].grid() == pair[1].grid())) fail(ErrorCode::kGridMismatch, "filter grids differ");
  Eigen::Matrix2d g;
  const double upper = pair[0].grid().max();
  for (int i = 0; i < 2; ++i) {
    g(i, 0) = signal_overlap(signal.first, pair[static_cast<std::size_t>(i)], upper);
    g(i, 1) = signal_overlap(signal.second, pair[static_cast<std::size_t>(i)], upper);
  }
  solve_pair(g, Eigen::Vector2d::Zero());
  return g;
}

TrackingRun track_ocf(const CompositeSignal& signal, std::span<const FilterFunction> pair,
                      const TrackingOptions& options) {
  const Eigen::Matrix2d g = component_overlaps(signal, pair);
  const double t = options.duration;
  for (const auto& f : pair) {
    if (std::abs(f.duration() - t) > 1e-12 * t) {
      fail(ErrorCode::kInvalidArgument, "filter duration differs from the tracking duration");
    }
  }
  const double block = 2.0 * t;
  check_options(options, block);
  // An N-qubit entangled probe dephases N times faster.
  const double rate_factor = std::max(qubits_of(pair[0]), qubits_of(pair[1]));

  TrackingRun run;
  run.method = TrackingMethod::kOcfPair;
  run.block_duration = block;
  run.samples.resize(sample_count(options.horizon, block));
  parallel_for(run.samples.size(), options.workers, [&](std::size_t b) {
    const double start = block * static_cast<double>(b);
    TrackingSample& out = run.samples[b];
    out = truth_at(signal, start + 0.5 * block);
    NoiseModel noise = options.noise;
    noise.seed = split_seed(options.noise.seed, b);
    noise.dephasing_rate *= rate_factor;
    Eigen::Vector2d measured;
    for (int i = 0; i < 2; ++i) {
      const double mid = start + (i + 0.5) * t;
      const double c = signal.first_weight(mid) * g(i, 0) + signal.second_weight(mid) * g(i, 1);
      const MeasurementRecord r = measure(c, noise, t, i + 1);
      if (r.saturated) out.failed = true;
      measured(i) = r.coefficient;
    }
    if (out.failed) return;
    const Eigen::Vector2d s = g.partialPivLu().solve(measured);
    out.first = s(0);
    out.second = s(1);
  });
  return run;
}

double tracking_rms(const TrackingRun& run, const CompositeSignal& signal, std::size_t points) {
  std::vector<const TrackingSample*> live;
  for (const auto& s : run.samples) {
    if (!s.failed) live.push_back(&s);
  }
  if (live.empty()) fail(ErrorCode::kRange, "no usable tracking samples");
  if (live.size() == 1 || points < 2) {
    const double d = live.front()->second - live.front()->second_true;
    return std::abs(d);
  }
  const double a = live.front()->time;
  const double b = live.back()->time;
  double sum = 0.0;
  std::size_t seg = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
    while (seg + 2 < live.size() && live[seg + 1]->time < t) ++seg;
    const auto& l = *live[seg];
    const auto& r = *live[seg + 1];
    const double u = std::clamp((t - l.time) / (r.time - l.time), 0.0, 1.0);
    const double d = l.second + u * (r.second - l.second) - signal.second_weight(t);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(points));
}

void write_tracking_csv(std::ostream& out, const TrackingRun& run) {
  CsvWriter csv(out);
  csv.header({"t", "s1_hat", "s2_hat", "s1_true", "s2_true", "failed"});
  for (const auto& s : run.samples) {
    csv.row({s.time, s.first, s.second, s.first_true, s.second_true, s.failed ? 1.0 : 0.0});
  }
}

}  // namespace noisespec
