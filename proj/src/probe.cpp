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

#include "noisespec/probe.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "noisespec/csv.hpp"
#include "noisespec/error.hpp"
#include "noisespec/quadrature.hpp"
#include "noisespec/rng.hpp"
#include "noisespec/special.hpp"

namespace noisespec {

void NoiseModel::validate() const {
  if (!(max_detector_error >= 0.0 && max_detector_error < 0.5)) {
    fail(ErrorCode::kInvalidArgument, "detector error bound must lie in [0, 0.5)");
  }
  if (!(dephasing_rate >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "dephasing rate must be non-negative");
  }
  if (shots && *shots == 0) fail(ErrorCode::kInvalidArgument, "shot count must be positive");
}

double survival_probability(double coefficient, double rate, double duration) {
  return 0.5 * (1.0 - std::exp(-coefficient - rate * duration));
}

Inversion invert_probability(double probability, double rate, double duration) {
  if (probability >= 0.5 - 1e-9) return {0.0, true};
  const double c = -std::log1p(-2.0 * probability) - rate * duration;
  return {std::max(0.0, c), false};
}

MeasurementRecord measure(double coefficient, const NoiseModel& noise, double duration,
                          int filter_index) {
  noise.validate();
  MeasurementRecord r;
  r.filter_index = filter_index;
  r.true_coefficient = coefficient;
  r.noise = noise;
  r.seed = split_seed(noise.seed, static_cast<std::uint64_t>(filter_index));
  Rng rng(r.seed);
  double p = survival_probability(coefficient, noise.dephasing_rate, duration);
  if (noise.shots) {
    std::binomial_distribution<std::uint64_t> draw(*noise.shots, std::clamp(p, 0.0, 1.0));
    p = static_cast<double>(draw(rng)) / static_cast<double>(*noise.shots);
  }
  if (noise.max_detector_error > 0.0) {
    std::uniform_real_distribution<double> err(-noise.max_detector_error,
                                               noise.max_detector_error);
    p += err(rng);
  }
  r.probability = std::clamp(p, 0.0, 1.0);
  const Inversion inv = invert_probability(r.probability, noise.dephasing_rate, duration);
  r.coefficient = inv.coefficient;
  r.saturated = inv.saturated;
  return r;
}

std::vector<MeasurementRecord> measure_all(std::span<const double> coefficients,
                                           const NoiseModel& noise, double duration) {
  std::vector<MeasurementRecord> out;
  out.reserve(coefficients.size());
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    out.push_back(measure(coefficients[k], noise, duration, static_cast<int>(k + 1)));
  }
  return out;
}

double relative_error_factor(double coefficient, double rate, double duration) {
  if (!(coefficient > 0.0)) fail(ErrorCode::kDomain, "error factor needs c > 0");
  return std::exp(coefficient + rate * duration) / coefficient;
}

namespace {

// (1/pi) int_0^inf a / (1 + w (omega - center)^2) cos(omega tau) d omega
double lorentzian_autocorrelation(const Lorentzian& l, double tau) {
  const double b = 1.0 / std::sqrt(l.width_scale);
  const double front = l.amplitude * b / std::numbers::pi;
  tau = std::abs(tau);
  if (l.center == 0.0) return 0.5 * l.amplitude * b * std::exp(-b * tau);
  if (tau == 0.0) return front * (std::numbers::pi / 2.0 + std::atan(l.center / b));
  const std::complex<double> i{0.0, 1.0};
  const std::complex<double> z{l.center, b};
  const std::complex<double> up =
      expint_e1_scaled(i * z * tau) + 2.0 * std::numbers::pi * i * std::exp(i * z * tau);
  const std::complex<double> down = expint_e1_scaled(-i * z * tau);
  return front * (0.5 * (up + down)).imag();
}

// R(tau) = int_0^(T - tau) y(t) y(t + tau) dt for piecewise-constant y.
double lag_product(const std::vector<Segment>& segments, double tau) {
  double total = 0.0;
  for (const auto& a : segments) {
    const double lo = a.begin + tau;
    const double hi = a.end + tau;
    for (const auto& b : segments) {
      const double overlap = std::min(hi, b.end) - std::max(lo, b.begin);
      if (overlap > 0.0) total += static_cast<double>(a.level * b.level) * overlap;
    }
  }
  return total;
}

}  // namespace

double autocorrelation(const SpectralDensity& spectrum, double tau) {
  if (!spectrum.analytic()) {
    fail(ErrorCode::kUnsupportedOracle, "autocorrelation needs an analytic spectrum");
  }
  double g = 0.0;
  for (const auto& l : spectrum.components()) g += lorentzian_autocorrelation(l, tau);
  return spectrum.scale() * g;
}

double chi_time_domain(const ModulationSet& set, const SpectralDensity& spectrum) {
  if (!spectrum.analytic()) {
    fail(ErrorCode::kUnsupportedOracle, "time-domain oracle needs an analytic spectrum");
  }
  if (spectrum.components().empty() || spectrum.scale() == 0.0) return 0.0;
  const auto segments = set.segments();
  const double duration = set.duration();

  // R is linear between consecutive differences of segment boundaries.
  std::vector<double> edges{0.0};
  for (const auto& s : segments) edges.push_back(s.end);
  std::vector<double> breaks;
  for (double a : edges) {
    for (double b : edges) {
      if (b >= a) breaks.push_back(b - a);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double x, double y) { return y - x < 1e-13; }),
               breaks.end());
  breaks.back() = duration;

  constexpr double kPanel = 0.05;
  const GaussRule& rule = gauss_legendre(20);
  std::vector<double> pieces;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    const double r_lo = lag_product(segments, lo);
    const double r_hi = lag_product(segments, hi);
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / kPanel)));
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * width;
      double sum = 0.0;
      for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
        const double tau = a + 0.5 * width * (rule.nodes[n] + 1.0);
        const double u = (tau - lo) / (hi - lo);
        const double r = (1.0 - u) * r_lo + u * r_hi;
        sum += rule.weights[n] * autocorrelation(spectrum, tau) * r;
      }
      pieces.push_back(0.5 * width * sum);
    }
  }
  return 8.0 * pairwise_sum(pieces);
}

void write_records_csv(std::ostream& out, std::span<const MeasurementRecord> records) {
  CsvWriter csv(out);
  csv.header({"k", "c", "p_meas", "c_hat", "saturated", "seed"});
  for (const auto& r : records) {
    csv.raw_row({std::to_string(r.filter_index), format_number(r.true_coefficient),
                 format_number(r.probability), format_number(r.coefficient),
                 r.saturated ? "1" : "0", std::to_string(r.seed)});
  }
}

}  // namespace noisespec
