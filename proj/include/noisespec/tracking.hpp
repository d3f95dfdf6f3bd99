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
#include <span>
#include <vector>

#include "noisespec/filter.hpp"
#include "noisespec/probe.hpp"
#include "noisespec/reconstruct.hpp"
#include "noisespec/spectra.hpp"

namespace noisespec {

enum class TrackingMethod { kFoBlock, kOcfPair };

const char* to_string(TrackingMethod method);

struct TrackingSample {
  double time = 0.0;  // block midpoint
  double first = 0.0;
  double second = 0.0;
  double first_true = 0.0;
  double second_true = 0.0;
  bool failed = false;  // every readout in the block saturated
};

struct TrackingRun {
  TrackingMethod method = TrackingMethod::kFoBlock;
  double block_duration = 0.0;
  std::vector<TrackingSample> samples;
};

/// Shared by both trackers.
struct TrackingOptions {
  double horizon = 500.0;
  double duration = 5.0;  // one filter
  NoiseModel noise;       // noise.seed is the master seed of the run
  int workers = 1;
};

struct FoTrackingSetup {
  int filters = 10;  // per block
  double omega_max = 11.5;
  double cutoff = 10.0;
  double grid_step = 0.005;
  RetentionRule retention = RetentionRule::relative(1e-2);
};

/// Repeated FO blocks. Each filter sees the signal frozen at its own midpoint;
/// (s1, s2) come from a least-squares fit of the reconstruction against the
/// two components passed through the same reconstruction.
TrackingRun track_fo(const CompositeSignal& signal, const FoTrackingSetup& setup,
                     const TrackingOptions& options);

/// Repeated filter pairs. `pair` holds the filters matched to the first and
/// second component, in that order, sampled on a common grid.
TrackingRun track_ocf(const CompositeSignal& signal, std::span<const FilterFunction> pair,
                      const TrackingOptions& options);

/// G(i, j) = int S_j F_i over the filter grid. kDegenerateComponents when
/// the matrix is numerically singular.
Eigen::Matrix2d component_overlaps(const CompositeSignal& signal,
                                   std::span<const FilterFunction> pair);

/// Root-mean-square distance between the piecewise-linear interpolation of
/// the recovered second coefficient and the true one, sampled on `points`
/// equally spaced instants between the first and last sample.
double tracking_rms(const TrackingRun& run, const CompositeSignal& signal,
                    std::size_t points = 2001);

/// CSV: t,s1_hat,s2_hat,s1_true,s2_true,failed
void write_tracking_csv(std::ostream& out, const TrackingRun& run);

}  // namespace noisespec
