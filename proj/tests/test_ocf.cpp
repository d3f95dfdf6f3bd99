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
#include <random>

#include "doctest.h"
#include "noisespec/error.hpp"
#include "noisespec/ocf.hpp"

using namespace noisespec;

namespace {

OcfProblem problem(int qubits, const SpectralDensity& target = single_peak_spectrum()) {
  OcfProblem p;
  p.target = target;
  p.qubits = qubits;
  p.duration = 5.0;
  return p;
}

// A spectrum that vanishes above the cutoff, so that the ceiling is exact.
const SpectralDensity kBandLimited =
    SpectralDensity::sampled({0.0, 2.0, 4.0, 9.5, 10.0, 30.0}, {0.2, 1.0, 0.3, 0.05, 0.0, 0.0});

}  // namespace

TEST_CASE("objective: matched filter reaches one, orthogonal filter zero") {
  const auto g = FrequencyGrid::with_max_step(30.0, 0.01);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = 3.0 * kBandLimited(g[i]);
  const FilterFunction matched(g, v, ModulationSet(PulseSequence({}, 5.0)));
  const auto on = xi_objective(matched, kBandLimited, 10.0, OutOfBand::kPenalty, 1.0);
  CHECK(on.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = g[i] > 11.0 && g[i] < 20.0 ? 1.0 : 0.0;
  const FilterFunction away(g, w, ModulationSet(PulseSequence({}, 5.0)));
  const auto off = xi_objective(away, kBandLimited, 20.0, OutOfBand::kTruncate, 1.0);
  CHECK(off.xi == 0.0);
}

TEST_CASE("objective: zero filter is undefined") {
  const auto g = FrequencyGrid::with_max_step(30.0, 0.01);
  const FilterFunction zero(g, std::vector<double>(g.size(), 0.0), ModulationSet(PulseSequence({}, 5.0)));
  try {
    (void)xi_objective(zero, single_peak_spectrum(), 10.0, OutOfBand::kPenalty, 1.0);
    FAIL("expected undefined objective");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUndefinedObjective);
  }
}

TEST_CASE("Cauchy-Schwarz ceiling over random modulations") {
  const auto g = FrequencyGrid::with_max_step(30.0, 0.01);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> sw;
    double t = 0.0;
    while (true) {
      t += 0.05 + 1.5 * u(rng);
      if (t >= 5.0) break;
      sw.push_back(t);
    }
    const ModulationSet m(PulseSequence(sw, 5.0));
    const auto v = xi_objective(filter_function(m, g), kBandLimited, 10.0, OutOfBand::kPenalty, 1.0);
    worst = std::max(worst, v.fidelity);
  }
  CHECK(worst <= 1.0 + 1e-6);
}

TEST_CASE("alignment residual identity") {
  const auto p = problem(6);
  const auto sol = optimize_filter(p);
  const auto f = filter_function(sol.modulation, p.grid());
  const double residual = alignment_residual(f, p.target, p.cutoff);
  const auto v = xi_objective(f, p.target, p.cutoff, OutOfBand::kTruncate, 0.0);
  // Unit vectors: |a - b|^2 = 2 (1 - a.b), with a.b the truncated fidelity.
  CHECK(residual == doctest::Approx(std::sqrt(2.0 * (1.0 - v.fidelity))).epsilon(1e-6));
}

TEST_CASE("zero budget returns the staircase guess") {
  auto p = problem(3);
  p.superiterations = 0;
  const auto sol = optimize_filter(p);
  const auto& got = std::get<ModulationSet>(sol.modulation);
  const auto guess = initial_guess(p);
  REQUIRE(got.qubit_count() == guess.qubit_count());
  for (std::size_t j = 0; j < got.qubit_count(); ++j) {
    CHECK(got.sequences()[j].switch_times() == guess.sequences()[j].switch_times());
  }
}

TEST_CASE("best-so-far trace is monotone and seeds reproduce it") {
  auto p = problem(2);
  p.superiterations = 5;
  p.inner_evaluations = 60;
  const auto a = optimize_filter(p);
  const auto b = optimize_filter(p);
  CHECK(a.trace == b.trace);
  CHECK(a.trace.size() == 6);
  for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i] >= a.trace[i - 1]);
  p.seed = 2;
  const auto c = optimize_filter(p);
  CHECK(c.trace != a.trace);
}

TEST_CASE("six qubits beat one at the same budget") {
  const auto one = optimize_filter(problem(1));
  const auto six = optimize_filter(problem(6));
  CHECK(six.value.fidelity > one.value.fidelity);
  CHECK(six.value.fidelity > 0.99);
}

TEST_CASE("continuous control: first superiteration never loses ground") {
  auto p = problem(0);
  p.superiterations = 1;
  p.inner_evaluations = 40;
  const auto sol = optimize_filter(p);
  REQUIRE(sol.trace.size() == 2);
  CHECK(sol.trace[1] >= sol.trace[0]);
  CHECK(std::holds_alternative<ContinuousModulation>(sol.modulation));
}

TEST_CASE("double Lorentzian: continuous control above the discrete ones") {
  const auto target = double_peak_spectrum();
  auto cont = problem(0, target);
  cont.superiterations = 4;
  cont.inner_evaluations = 100;
  auto one = problem(1, target);
  one.superiterations = 4;
  one.inner_evaluations = 100;
  auto six = problem(6, target);
  six.superiterations = 4;
  six.inner_evaluations = 100;
  const double fc = optimize_filter(cont).value.fidelity;
  CHECK(fc > optimize_filter(one).value.fidelity);
  CHECK(fc > optimize_filter(six).value.fidelity);
}

TEST_CASE("problem validation") {
  auto p = problem(1);
  p.duration = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = problem(-1);
  CHECK_THROWS_AS(p.validate(), Error);
  p = problem(1);
  p.inner_evaluations = -1;
  CHECK_THROWS_AS(p.validate(), Error);
}
