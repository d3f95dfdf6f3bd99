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
#include <limits>
#include <random>

#include "doctest.h"
#include "noisespec/error.hpp"
#include "noisespec/fisher.hpp"
#include "noisespec/pipeline.hpp"
#include "noisespec/probe.hpp"

using namespace noisespec;

namespace {

// Flat unit filter on [0, 10]; a flat direction of height h has overlap 10 h.
FilterFunction flat(const FrequencyGrid& g, double lo = 0.0, double hi = 10.0) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = (g[i] >= lo && g[i] <= hi) ? 1.0 : 0.0;
  return FilterFunction(g, v, ModulationSet(PulseSequence({}, 1.0)));
}

SpectralDensity level(double h) { return SpectralDensity::sampled({0.0, 100.0}, {h, h}); }

std::vector<FilterFunction> fo_filters() {
  ProtocolSetup s;
  s.grid_step = 0.01;
  return protocol_filters(s);
}

}  // namespace

TEST_CASE("weights") {
  CHECK(fisher_weight(0.5, FisherWeighting::kPublished) == 1.0);
  CHECK(fisher_weight(0.2, FisherWeighting::kPublished) == doctest::Approx(4.0));
  // (1/2 - p)^2 / (p (1 - p)) for the dephasing readout.
  CHECK(fisher_weight(0.2, FisherWeighting::kExactBernoulli) == doctest::Approx(0.09 / 0.16));
}

TEST_CASE("operator construction excludes degenerate probabilities") {
  const FrequencyGrid g(20.0, 2001);
  const std::vector<FilterFunction> f{flat(g), flat(g), flat(g)};
  const std::vector<double> p{0.5, 0.0, 1.0};
  const auto fio = build_fio(f, p);
  CHECK(fio.kept.size() == 1);
  CHECK(fio.excluded.size() == 2);
  CHECK(fio.weights[0] == 1.0);
  const std::vector<double> none{0.0, 1.0, 0.0};
  try {
    (void)build_fio(f, none);
    FAIL("expected empty operator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyOperator);
  }
}

TEST_CASE("directional information and the Cramer-Rao bound") {
  const FrequencyGrid g10(10.0, 1001);
  const std::vector<FilterFunction> one{flat(g10)};
  const std::vector<double> half{0.5};
  const auto fio = build_fio(one, half);
  CHECK(directional_fisher(fio, level(0.1), 10.0) == doctest::Approx(1.0));
  CHECK(directional_fisher(fio, level(0.2), 10.0) == doctest::Approx(4.0));
  const FrequencyGrid g(20.0, 2001);
  CHECK(cramer_rao(4.0) == 0.5);
  CHECK(cramer_rao(0.0) == std::numeric_limits<double>::infinity());
  // A direction living only above the filter band sees nothing.
  const std::vector<FilterFunction> low{flat(g, 0.0, 5.0)};
  const auto fio_low = build_fio(low, half);
  const auto high = SpectralDensity::sampled({0.0, 12.0, 12.5, 20.0}, {0.0, 0.0, 1.0, 1.0});
  CHECK(directional_fisher(fio_low, high, 20.0) == 0.0);
  CHECK(std::isinf(cramer_rao(fio_low, high, 20.0)));
}

TEST_CASE("information is nonnegative along random directions") {
  const auto f = fo_filters();
  std::vector<double> p;
  for (std::size_t k = 0; k < f.size(); ++k) p.push_back(0.1 + 0.015 * static_cast<double>(k));
  const auto fio = build_fio(f, p, FisherWeighting::kExactBernoulli, 100.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto& g = f.front().grid();
  for (int i = 0; i < 100; ++i) {
    std::vector<double> dir(g.size());
    const double a = n(rng), b = n(rng), c = 10.0 * std::abs(n(rng));
    for (std::size_t j = 0; j < g.size(); ++j) dir[j] = a / (1.0 + (g[j] - c) * (g[j] - c)) + b * std::exp(-0.1 * g[j]);
    CHECK(directional_fisher(fio, dir, 57.5) >= 0.0);
  }
}

TEST_CASE("rank matches the filter set") {
  const auto f = fo_filters();
  std::vector<double> p(f.size(), 0.3);
  CHECK(fio_rank(build_fio(f, p), 57.5) == 20);
  CHECK(filter_rank(f, 57.5) == 20);
  auto dup = f;
  dup[7] = dup[3];
  CHECK(fio_rank(build_fio(dup, p), 57.5) == 19);
  CHECK(filter_rank(dup, 57.5) == 19);
  const FrequencyGrid g(20.0, 2001);
  const std::vector<FilterFunction> two{flat(g), flat(g)};
  const std::vector<double> pp{0.3, 0.4};
  CHECK(fio_rank(build_fio(two, pp), 20.0) == 1);
}

TEST_CASE("information adds over unions of measurements") {
  const auto f = fo_filters();
  std::vector<double> p;
  for (std::size_t k = 0; k < f.size(); ++k) p.push_back(0.2 + 0.01 * static_cast<double>(k));
  const std::span<const FilterFunction> fs(f);
  const std::span<const double> ps(p);
  const auto a = build_fio(fs.first(8), ps.first(8));
  const auto b = build_fio(fs.subspan(8), ps.subspan(8));
  const auto all = build_fio(f, p);
  const auto dir = double_peak_spectrum();
  const double sum = directional_fisher(a, dir, 57.5) + directional_fisher(b, dir, 57.5);
  CHECK(directional_fisher(merge(a, b), dir, 57.5) == doctest::Approx(sum).epsilon(1e-14));
  CHECK(directional_fisher(all, dir, 57.5) == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("maximum-likelihood deviation is unbiased and respects the bound") {
  ProtocolSetup setup;
  setup.grid_step = 0.01;
  const PreparedProtocol prep(setup, double_peak_spectrum());
  const auto dir = SpectralDensity::lorentzian_mixture({{1.0, 4.0, 1.0}});
  std::vector<double> d;
  for (const auto& f : prep.filters()) d.push_back(signal_overlap(dir, f, 57.5));
  const auto st = deviation_study(prep.coefficients(), d, 10000, 0.0, 5.0, 300, 3,
                                  FisherWeighting::kExactBernoulli, 2);
  CHECK(std::abs(st.mean) < 4.0 * st.spread / std::sqrt(300.0));
  CHECK((st.bound - st.spread) / st.spread_error < 3.0);
  CHECK(st.spread == doctest::Approx(st.bound).epsilon(0.15));
  // Noise-free counts give back zero.
  std::vector<std::uint64_t> counts;
  for (double c : prep.coefficients()) {
    counts.push_back(static_cast<std::uint64_t>(std::llround(1e8 * survival_probability(c, 0.0, 5.0))));
  }
  CHECK(std::abs(estimate_deviation(prep.coefficients(), d, counts, 100000000, 0.0, 5.0)) < 1e-6);
}
