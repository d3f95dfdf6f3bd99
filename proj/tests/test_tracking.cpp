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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "noisespec/error.hpp"
#include "noisespec/ocf.hpp"
#include "noisespec/tracking.hpp"

using namespace noisespec;

namespace {

constexpr double kAmplitude = 0.006;

CompositeSignal signal(double oscillation) {
  return {oscillation, single_peak_spectrum(kAmplitude), double_peak_spectrum(kAmplitude)};
}

// Filter pair matched to the two components; designed once per qubit count.
const std::vector<FilterFunction>& pair(int qubits) {
  static std::vector<FilterFunction> cache[7];
  auto& slot = cache[qubits];
  if (slot.empty()) {
    OcfProblem p;
    p.duration = 5.0;
    p.qubits = qubits;
    const auto grid = p.grid();
    for (const auto& target : {single_peak_spectrum(), double_peak_spectrum()}) {
      p.target = target;
      slot.push_back(filter_function(optimize_filter(p).modulation, grid));
    }
  }
  return slot;
}

TrackingOptions options(std::uint64_t seed, double detector_error) {
  TrackingOptions o;
  o.noise.max_detector_error = detector_error;
  o.noise.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("sample counts follow the block lengths") {
  const auto s = signal(0.004 * std::numbers::pi);
  const auto fo = track_fo(s, FoTrackingSetup{}, options(1, 0.001));
  CHECK(fo.samples.size() == 10);
  CHECK(fo.block_duration == 50.0);
  CHECK(fo.samples.front().time == 25.0);
  const auto ocf = track_ocf(s, pair(1), options(1, 0.001));
  CHECK(ocf.samples.size() == 50);
  CHECK(ocf.block_duration == 10.0);
}

TEST_CASE("noiseless static signal is recovered exactly") {
  // Both weights are constant at a fixed phase, so there is no time skew.
  CompositeSignal s = signal(0.0);
  for (const auto& run : {track_fo(s, FoTrackingSetup{}, options(1, 0.0)),
                          track_ocf(s, pair(1), options(1, 0.0))}) {
    for (const auto& x : run.samples) {
      CHECK(std::abs(x.first - x.first_true) < 1e-6);
      CHECK(std::abs(x.second - x.second_true) < 1e-6);
    }
    CHECK(tracking_rms(run, s) < 1e-6);
  }
}

TEST_CASE("proportional components cannot be separated") {
  CompositeSignal s{0.01, single_peak_spectrum(kAmplitude), single_peak_spectrum(2 * kAmplitude)};
  try {
    (void)component_overlaps(s, pair(1));
    FAIL("expected degenerate components");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateComponents);
  }
  CHECK_THROWS_AS(track_ocf(s, pair(1), options(1, 0.0)), Error);
}

TEST_CASE("fast oscillation defeats the FO blocks") {
  const auto s = signal(0.01 * std::numbers::pi);
  const auto fo = track_fo(s, FoTrackingSetup{}, options(100, 0.001));
  CHECK(tracking_rms(fo, s) >= 0.3);
}

TEST_CASE("six-qubit pairs track better than single-qubit pairs") {
  const auto s = signal(0.004 * std::numbers::pi);
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const double one = tracking_rms(track_ocf(s, pair(1), options(seed, 0.001)), s);
    const double six = tracking_rms(track_ocf(s, pair(6), options(seed, 0.001)), s);
    wins += six < one ? 1 : 0;
  }
  CHECK(wins >= 16);
}

TEST_CASE("runs are independent of the worker count") {
  const auto s = signal(0.004 * std::numbers::pi);
  auto serial = options(5, 0.001);
  auto parallel = serial;
  parallel.workers = 4;
  const auto a = track_fo(s, FoTrackingSetup{}, serial);
  const auto b = track_fo(s, FoTrackingSetup{}, parallel);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].first == b.samples[i].first);
    CHECK(a.samples[i].second == b.samples[i].second);
  }
}
