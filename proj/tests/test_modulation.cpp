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
#include <random>
#include <sstream>

#include "doctest.h"
#include "noisespec/error.hpp"
#include "noisespec/modulation.hpp"

using namespace noisespec;
using std::numbers::pi;

TEST_CASE("FO sequences sit at the zeros of the target cosine") {
  CHECK(fo_sequence(1, 20, 11.5, 5.0).pulse_count() == 0);
  const auto k2 = fo_sequence(2, 20, 11.5, 5.0);
  REQUIRE(k2.pulse_count() == 1);
  CHECK(k2.switch_times()[0] == doctest::Approx(2.7318196987737333).epsilon(1e-14));
  const auto k20 = fo_sequence(20, 20, 11.5, 5.0);
  const double w = 11.5 * 19.0 / 20.0;
  for (std::size_t n = 0; n < k20.pulse_count(); ++n) {
    CHECK(k20.switch_times()[n] == doctest::Approx((pi / 2 + n * pi) / w));
  }
  CHECK(k20.switch_times().back() < 5.0);
  for (int k = 1; k <= 20; ++k) CHECK(fo_sequence(k, 20, 11.5, 1e-9).pulse_count() == 0);
}

TEST_CASE("AS sequences sit at the zeros of the target sine") {
  const auto k1 = as_sequence(1, 20, 10.0, 25.0);
  REQUIRE(k1.pulse_count() == 3);
  CHECK(k1.switch_times()[0] == doctest::Approx(2 * pi));
  CHECK(k1.switch_times()[1] == doctest::Approx(4 * pi));
  CHECK(k1.switch_times()[2] == doctest::Approx(6 * pi));
  const auto kk = as_sequence(20, 20, 10.0, 5.0);
  for (std::size_t n = 1; n < kk.pulse_count(); ++n) {
    CHECK(kk.switch_times()[n] - kk.switch_times()[n - 1] == doctest::Approx(pi / 10.0));
  }
  // omega'' T < pi leaves no interior zero.
  CHECK(as_sequence(1, 20, 10.0, 5.0).pulse_count() == 0);
}

TEST_CASE("pulse sequences validate their switch times") {
  CHECK_THROWS_AS(PulseSequence({2.0, 1.0}, 5.0), Error);
  CHECK_THROWS_AS(PulseSequence({0.0}, 5.0), Error);
  CHECK_THROWS_AS(PulseSequence({5.0}, 5.0), Error);
  CHECK_THROWS_AS(PulseSequence({}, 0.0), Error);
}

TEST_CASE("levels are right-continuous sign flips") {
  const PulseSequence empty({}, 3.0);
  CHECK(empty.level(0.0) == 1);
  CHECK(empty.level(3.0) == 1);
  const PulseSequence one({1.0}, 3.0);
  CHECK(one.level(1.0 - 1e-12) == 1);
  CHECK(one.level(1.0) == -1);
  CHECK_THROWS_AS(one.level(3.5), Error);
  CHECK_THROWS_AS(one.level(-0.1), Error);
  const PulseSequence neg({1.0}, 3.0, -1);
  CHECK(neg.level(0.5) == -1);
}

TEST_CASE("the number of sign changes equals the number of switches") {
  const auto s = fo_sequence(13, 20, 11.5, 7.0);
  int changes = 0;
  int prev = s.level(0.0);
  for (int i = 1; i <= 70000; ++i) {
    const int cur = s.level(7.0 * i / 70000.0);
    changes += cur != prev ? 1 : 0;
    prev = cur;
  }
  CHECK(changes == static_cast<int>(s.pulse_count()));
}

TEST_CASE("a set sums its qubits") {
  const auto s = fo_sequence(5, 20, 11.5, 5.0);
  const ModulationSet three({s, s, s});
  for (double t : {0.0, 0.7, 1.9, 3.3, 5.0}) CHECK(three.level(t) == 3 * s.level(t));
  CHECK_THROWS_AS(ModulationSet({s, PulseSequence({}, 4.0)}), Error);
}

TEST_CASE("staircase with one qubit is the square wave") {
  const auto set = staircase_split(1.0, 1, 5.0);
  REQUIRE(set.qubit_count() == 1);
  const auto& sw = set.sequences()[0].switch_times();
  REQUIRE(sw.size() == 2);
  CHECK(sw[0] == doctest::Approx(pi / 2));
  CHECK(sw[1] == doctest::Approx(3 * pi / 2));
  // Same as the FO construction at that frequency.
  const auto fo = fo_sequence(3, 20, 10.0, 5.0);
  const auto st = staircase_split(1.0, 1, 5.0).sequences()[0];
  CHECK(fo.switch_times().size() == st.switch_times().size());
}

TEST_CASE("staircase levels quantize N cos(omega t)") {
  for (int n : {2, 3, 4, 6}) {
    const double omega = 1.7;
    const auto set = staircase_split(omega, n, 5.0);
    CHECK(set.qubit_count() == static_cast<std::size_t>(n));
    int worst_parity = 0;
    double worst_error = 0.0;
    for (int i = 0; i <= 5000; ++i) {
      const double t = 5.0 * i / 5000.0;
      const int y = set.level(t);
      worst_parity = std::max(worst_parity, std::abs((y + n) % 2));
      CHECK(std::abs(y) <= n);
      const double target = n * std::cos(omega * t);
      // Skip instants within rounding distance of a quantization boundary.
      const double frac = (target + n) / 2.0 - std::floor((target + n) / 2.0);
      if (std::abs(frac - 0.5) > 1e-6) worst_error = std::max(worst_error, std::abs(y - target));
    }
    CHECK(worst_parity == 0);
    CHECK(worst_error <= 1.0 + 1e-12);
  }
  const auto two = staircase_split(2.3, 2, 5.0);
  for (const auto& seg : two.segments()) {
    CHECK((seg.level == -2 || seg.level == 0 || seg.level == 2));
  }
}

TEST_CASE("segments cover [0, T] and merge equal neighbours") {
  const auto set = staircase_split(2.0, 4, 5.0);
  const auto segs = set.segments();
  CHECK(segs.front().begin == 0.0);
  CHECK(segs.back().end == 5.0);
  for (std::size_t i = 1; i < segs.size(); ++i) {
    CHECK(segs[i].begin == segs[i - 1].end);
    CHECK(segs[i].level != segs[i - 1].level);
  }
}

TEST_CASE("continuous modulation stays on the unit circle") {
  const ContinuousModulation zero(5.0);
  CHECK(zero(2.0).y == 1.0);
  CHECK(zero(2.0).z == 0.0);
  const ContinuousModulation flipped(5.0, pi);
  CHECK(flipped(1.0).y == doctest::Approx(-1.0));
  CHECK(flipped(1.0).z == doctest::Approx(0.0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ContinuousModulation m(5.0, u(rng), u(rng), {{3.0, u(rng), u(rng)}, {7.5, u(rng), u(rng)}});
    for (int i = 0; i <= 50; ++i) {
      const auto v = m(5.0 * i / 50.0);
      worst = std::max(worst, std::abs(v.y * v.y + v.z * v.z - 1.0));
    }
  }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(zero(5.5), Error);
}

TEST_CASE("phase rate bound holds") {
  const ContinuousModulation m(5.0, 0.0, 1.5, {{3.0, 0.4, -0.2}});
  double worst = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const double t = 5.0 * i / 5000.0;
    const double h = 1e-6;
    worst = std::max(worst, std::abs(m.phase(t + h) - m.phase(t)) / h);
  }
  CHECK(worst <= m.max_phase_rate() + 1e-4);
}

TEST_CASE("switch times export one row per pulse") {
  std::ostringstream out;
  write_switch_csv(out, staircase_split(1.0, 2, 5.0));
  std::istringstream in(out.str());
  std::string line;
  long rows = -1;  // the header row
  while (std::getline(in, line)) {
    if (line.front() != '#') ++rows;
  }
  CHECK(out.str().find("\nqubit,switch_time\n") != std::string::npos);
  const auto set = staircase_split(1.0, 2, 5.0);
  CHECK(rows == static_cast<long>(set.sequences()[0].pulse_count() + set.sequences()[1].pulse_count()));
}
