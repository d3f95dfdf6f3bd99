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
#include <memory>
#include <map>
#include <random>

#include "doctest.h"
#include "noisespec/error.hpp"
#include "noisespec/filter.hpp"
#include "noisespec/pipeline.hpp"
#include "noisespec/reconstruct.hpp"

using namespace noisespec;

namespace {

std::vector<FilterFunction> fo_filters(double t = 5.0) {
  ProtocolSetup s;
  s.duration = t;
  s.grid_step = 0.01;
  return protocol_filters(s);
}

const auto kPoints = fidelity_points(10.0, 20);

}  // namespace

TEST_CASE("fidelity is a cosine similarity") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity(a, std::vector<double>{2.0, 4.0, 6.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity(a, std::vector<double>{-1.0, -2.0, -3.0}) == doctest::Approx(-1.0));
  CHECK(fidelity(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}) == 0.0);
  try {
    (void)fidelity(a, std::vector<double>{0.0, 0.0, 0.0});
    FAIL("expected undefined fidelity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUndefinedFidelity);
  }
  CHECK(kPoints.front() == doctest::Approx(0.5));
  CHECK(kPoints.back() == doctest::Approx(10.0));
}

TEST_CASE("orthonormal FO basis") {
  const auto f = fo_filters();
  const auto basis = fo_basis(overlap_matrix(f, 10.0));
  CHECK(basis.eigenvalues(19) >= 0.0);
  for (Eigen::Index i = 1; i < basis.eigenvalues.size(); ++i) {
    CHECK(basis.eigenvalues(i) <= basis.eigenvalues(i - 1));
  }
  const auto& g = f.front().grid();
  std::vector<std::vector<double>> ortho;
  for (std::size_t k = 0; k < 20; ++k) ortho.push_back(orthonormal_filter(basis, f, k));
  double worst = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    for (std::size_t l = 0; l <= k; ++l) {
      std::vector<double> p(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) p[i] = ortho[k][i] * ortho[l][i];
      // Rounding in the weak directions grows like 1 / sqrt(lambda_k lambda_l).
      const double scale = std::sqrt(basis.eigenvalues(static_cast<Eigen::Index>(k)) *
                                     basis.eigenvalues(static_cast<Eigen::Index>(l))) /
                           basis.eigenvalues(0);
      worst = std::max(worst, std::abs(integrate(p, g, 10.0) - (k == l ? 1.0 : 0.0)) * scale);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("noiseless FO reproduces spectra inside the filter span") {
  const auto f = fo_filters();
  const auto& g = f.front().grid();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(20);
  for (double& x : w) x = u(rng);
  std::vector<double> c(20, 0.0);
  const auto a = overlap_matrix(f, 10.0);
  for (int k = 0; k < 20; ++k) {
    for (int l = 0; l < 20; ++l) c[static_cast<std::size_t>(k)] += a(k, l) * w[static_cast<std::size_t>(l)];
  }
  const auto r = fo_reconstruct(f, c, 10.0, RetentionRule::largest(20), kPoints);
  double worst = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < r.grid_values.size(); ++i) {
    double truth = 0.0;
    for (std::size_t l = 0; l < 20; ++l) truth += w[l] * f[l][i];
    worst = std::max(worst, std::abs(r.grid_values[i] - truth));
    peak = std::max(peak, std::abs(truth));
  }
  CHECK(worst / peak < 1e-6);
  CHECK(r.retained == 20);
  CHECK(r.grid_step == doctest::Approx(g.step()));
}

TEST_CASE("noiseless FO estimate is the orthogonal projection") {
  const auto f = fo_filters();
  const auto& g = f.front().grid();
  const auto s = double_peak_spectrum();
  std::vector<double> c;
  for (const auto& fk : f) c.push_back(integrate([&] {
    std::vector<double> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) p[i] = s(g[i]) * fk[i];
    return p;
  }(), g, 10.0));
  const auto r = fo_reconstruct(f, c, 10.0, RetentionRule::relative(1e-10), kPoints);
  const auto basis = fo_basis(overlap_matrix(f, 10.0));
  double worst = 0.0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(r.retained); ++k) {
    const auto fk = orthonormal_filter(basis, f, k);
    std::vector<double> p(g.size(), 0.0);
    for (std::size_t i = 0; i < r.grid_values.size(); ++i) p[i] = (s(g[i]) - r.grid_values[i]) * fk[i];
    worst = std::max(worst, std::abs(integrate(p, g, 10.0)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("saturated readouts drop their filter") {
  ProtocolSetup setup;
  setup.grid_step = 0.01;
  const PreparedProtocol p(setup, double_peak_spectrum());
  std::vector<double> c = p.coefficients();
  std::unique_ptr<bool[]> sat(new bool[20]());
  sat[3] = true;
  sat[11] = true;
  const auto r = p.reconstruct(c, {sat.get(), 20});
  CHECK(r.used_filters.size() == 18);
  CHECK(std::find(r.used_filters.begin(), r.used_filters.end(), 3) == r.used_filters.end());
}

TEST_CASE("an empty filter set has no basis") {
  const FrequencyGrid g(20.0, 201);
  const std::vector<FilterFunction> zero(3, FilterFunction(g, std::vector<double>(201, 0.0),
                                                           ModulationSet(PulseSequence({}, 1.0))));
  const std::vector<double> c(3, 1.0);
  try {
    (void)fo_reconstruct(zero, c, 10.0, RetentionRule::relative(1e-4), kPoints);
    FAIL("expected a degenerate basis");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateBasis);
  }
}

TEST_CASE("FO fidelity without dephasing") {
  ProtocolSetup setup;
  NoiseModel n;
  n.max_detector_error = 0.01;
  const PreparedProtocol p(setup, double_peak_spectrum());
  const auto stats = repeat_trials(p, n, 30, 9, 2);
  CHECK(stats.mean > 0.99);
  CHECK(stats.failures == 0);
}

TEST_CASE("dropping small eigenvalues helps under heavy noise") {
  ProtocolSetup setup;
  setup.retention = RetentionRule::largest(20);
  const PreparedProtocol all(setup, double_peak_spectrum());
  setup.retention = RetentionRule::largest(10);
  const PreparedProtocol half(setup, double_peak_spectrum());
  NoiseModel n;
  n.max_detector_error = 0.05;
  int better = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    n.seed = s;
    better += half.run(n).fidelity > all.run(n).fidelity ? 1 : 0;
  }
  CHECK(better >= 60);
}

TEST_CASE("cross-validated retention runs and keeps a candidate threshold") {
  ProtocolSetup setup;
  setup.retention = RetentionRule::cross_validated();
  const PreparedProtocol p(setup, double_peak_spectrum());
  NoiseModel n;
  n.max_detector_error = 0.01;
  n.seed = 4;
  const auto t = p.run(n);
  const auto& cands = setup.retention.candidates;
  CHECK(std::find(cands.begin(), cands.end(), t.reconstruction.threshold) != cands.end());
  // Leave-one-out selection is noisy; it only has to give a usable estimate.
  CHECK(t.fidelity > 0.8);
}

TEST_CASE("AS inversion recovers bin values from synthetic coefficients") {
  ProtocolSetup setup;
  setup.protocol = Protocol::kAs;
  setup.omega_max = 10.0;
  setup.duration = 20.0;
  const auto f = protocol_filters(setup);
  const auto in = prepare_as(f, 10.0);
  Eigen::VectorXd s(20);
  for (int l = 0; l < 20; ++l) s(l) = double_peak_spectrum()(in.points[static_cast<std::size_t>(l)]);
  const Eigen::VectorXd c = in.bins * s;
  std::vector<double> cv(c.data(), c.data() + c.size());
  std::unique_ptr<bool[]> none(new bool[20]());
  const auto r = as_reconstruct(in, cv, {none.get(), 20});
  for (int l = 0; l < 20; ++l) {
    CHECK(r.point_values[static_cast<std::size_t>(l)] == doctest::Approx(s(l)).epsilon(1e-2));
  }
  CHECK(r.condition_number > 1.0);
}

TEST_CASE("AS delta approximation divides by the filter area") {
  ProtocolSetup setup;
  setup.protocol = Protocol::kAs;
  setup.omega_max = 10.0;
  setup.duration = 20.0;
  const auto f = protocol_filters(setup);
  const auto in = prepare_as(f, 10.0, AsMethod::kDelta);
  std::vector<double> c(20, 1.0);
  std::unique_ptr<bool[]> none(new bool[20]());
  const auto r = as_reconstruct(in, c, {none.get(), 20});
  for (std::size_t k = 0; k < 20; ++k) CHECK(r.point_values[k] == doctest::Approx(1.0 / in.areas[k]));
}

TEST_CASE("AS at very short times is ill-conditioned") {
  ProtocolSetup setup;
  setup.protocol = Protocol::kAs;
  setup.omega_max = 10.0;
  setup.duration = 0.2;
  const auto f = protocol_filters(setup);
  std::vector<double> c(20, 1.0);
  try {
    (void)as_reconstruct(f, c, 10.0);
    FAIL("expected ill-conditioning");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIllConditioned);
  }
}

TEST_CASE("failed trials count as zero fidelity") {
  ProtocolSetup setup;
  setup.protocol = Protocol::kAs;
  setup.omega_max = 10.0;
  setup.duration = 0.2;
  const PreparedProtocol p(setup, double_peak_spectrum());
  NoiseModel n;
  const auto t = p.run(n);
  CHECK(t.failed);
  CHECK(t.fidelity == 0.0);
}

TEST_CASE("optimal-time scan is independent of the worker count") {
  ProtocolSetup setup;
  setup.grid_step = 0.01;
  NoiseModel n;
  n.max_detector_error = 0.01;
  n.dephasing_rate = 0.4;
  const std::vector<double> ts{1, 2, 3};
  const auto a = scan_optimal_time(setup, double_peak_spectrum(), n, ts, 12, 5, 1);
  const auto b = scan_optimal_time(setup, double_peak_spectrum(), n, ts, 12, 5, 4);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(a.points[i].stats.mean == b.points[i].stats.mean);
    CHECK(a.points[i].stats.samples == b.points[i].stats.samples);
  }
  CHECK(a.best == b.best);
}

TEST_CASE("Gamma = 0 scan: flat top and a stable optimum") {
  ProtocolSetup setup;
  setup.grid_step = 0.01;
  NoiseModel n;
  n.max_detector_error = 0.01;
  const std::vector<double> ts{1, 2, 3, 5, 7, 10};
  std::map<double, int> votes;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto r = scan_optimal_time(setup, double_peak_spectrum(), n, ts, 10, seed, 0);
    votes[r.best_duration()] += 1;
    // Once the filters resolve the spectrum, longer times gain little.
    CHECK(std::abs(r.points[4].stats.mean - r.points[3].stats.mean) < 5e-3);
  }
  int top = 0;
  for (const auto& [t, v] : votes) top = std::max(top, v);
  CHECK(top >= 15);
  CHECK(votes.count(1.0) == 0);
}

TEST_CASE("setup validation") {
  ProtocolSetup s;
  s.protocol = Protocol::kAs;
  s.qubits = 2;
  CHECK_THROWS_AS(s.validate(), Error);
  ProtocolSetup t;
  t.cutoff = 100.0;
  CHECK_THROWS_AS(t.validate(), Error);
}
