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

#include "noisespec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "noisespec/error.hpp"
#include "noisespec/filter.hpp"

namespace noisespec {

double Lorentzian::operator()(double omega) const noexcept {
  const double d = omega - center;
  return amplitude / (1.0 + width_scale * d * d);
}

SpectralDensity SpectralDensity::lorentzian_mixture(std::vector<Lorentzian> components,
                                                    double scale) {
  for (const auto& c : components) {
    if (!(c.amplitude >= 0.0) || !(c.width_scale > 0.0) || !(c.center >= 0.0) ||
        !std::isfinite(c.amplitude) || !std::isfinite(c.center) ||
        !std::isfinite(c.width_scale)) {
      fail(ErrorCode::kInvalidArgument,
           "Lorentzian needs amplitude >= 0, center >= 0 and width_scale > 0");
    }
  }
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    fail(ErrorCode::kInvalidArgument, "spectral scale must be finite and >= 0");
  }
  SpectralDensity s;
  s.components_ = std::move(components);
  s.scale_ = scale;
  return s;
}

SpectralDensity SpectralDensity::sampled(std::vector<double> frequencies,
                                         std::vector<double> values, double scale) {
  if (frequencies.size() != values.size() || frequencies.size() < 2) {
    fail(ErrorCode::kInvalidArgument,
         "sampled spectrum needs at least two (frequency, value) pairs");
  }
  if (frequencies.front() < 0.0) {
    fail(ErrorCode::kInvalidArgument, "sampled spectrum starts below zero frequency");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(frequencies[i])) {
      fail(ErrorCode::kInvalidArgument, "sampled spectrum contains non-finite entries");
    }
    if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
      fail(ErrorCode::kInvalidArgument,
           "sampled spectrum frequencies must be strictly increasing");
    }
  }
  if (!std::isfinite(scale)) fail(ErrorCode::kInvalidArgument, "spectral scale must be finite");
  SpectralDensity s;
  s.frequencies_ = std::move(frequencies);
  s.values_ = std::move(values);
  s.scale_ = scale;
  s.sampled_ = true;
  return s;
}

double SpectralDensity::operator()(double omega) const {
  if (!(omega >= 0.0)) {
    fail(ErrorCode::kRange, "spectral density is one-sided: omega must be >= 0");
  }
  if (!sampled_) {
    double sum = 0.0;
    for (const auto& c : components_) sum += c(omega);
    return scale_ * sum;
  }
  if (omega < frequencies_.front() || omega > frequencies_.back()) {
    fail(ErrorCode::kRange, "omega = " + std::to_string(omega) +
                                " lies outside the sampled spectrum range");
  }
  auto it = std::upper_bound(frequencies_.begin(), frequencies_.end(), omega);
  if (it == frequencies_.end()) return scale_ * values_.back();
  const std::size_t hi = static_cast<std::size_t>(it - frequencies_.begin());
  const std::size_t lo = hi - 1;
  const double u = (omega - frequencies_[lo]) / (frequencies_[hi] - frequencies_[lo]);
  return scale_ * ((1.0 - u) * values_[lo] + u * values_[hi]);
}

std::vector<double> SpectralDensity::sample(const FrequencyGrid& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(grid[i]);
  return out;
}

std::vector<double> SpectralDensity::sample_until(const FrequencyGrid& grid,
                                                  double upper) const {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = grid[i];
    if (w > upper * (1.0 + 1e-12)) break;
    if (sampled_ && (w < frequencies_.front() || w > frequencies_.back())) continue;
    out[i] = (*this)(w);
  }
  return out;
}

SpectralDensity SpectralDensity::with_scale(double scale) const {
  SpectralDensity s = *this;
  s.scale_ = scale;
  return s;
}

SpectralDensity SpectralDensity::combine(double a, const SpectralDensity& x, double b,
                                         const SpectralDensity& y) {
  if (x.analytic() && y.analytic()) {
    std::vector<Lorentzian> merged;
    for (auto c : x.components_) {
      c.amplitude *= a * x.scale_;
      merged.push_back(c);
    }
    for (auto c : y.components_) {
      c.amplitude *= b * y.scale_;
      merged.push_back(c);
    }
    return lorentzian_mixture(std::move(merged), 1.0);
  }
  if (!x.analytic() && !y.analytic() && x.frequencies_ == y.frequencies_) {
    std::vector<double> v(x.values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = a * x.scale_ * x.values_[i] + b * y.scale_ * y.values_[i];
    }
    return sampled(x.frequencies_, std::move(v), 1.0);
  }
  fail(ErrorCode::kInvalidArgument,
       "can only combine two analytic spectra or two tables on the same frequencies");
}

double CompositeSignal::first_weight(double t) const {
  const double s = std::sin(oscillation_rate * t);
  return s * s;
}

double CompositeSignal::second_weight(double t) const {
  const double c = std::cos(oscillation_rate * t);
  return c * c;
}

double CompositeSignal::operator()(double omega, double t) const {
  if (!(t >= 0.0)) fail(ErrorCode::kRange, "composite signal time must be >= 0");
  return first_weight(t) * first(omega) + second_weight(t) * second(omega);
}

SpectralDensity CompositeSignal::at(double t) const {
  return SpectralDensity::combine(first_weight(t), first, second_weight(t), second);
}

double calibrate_amplitude(const SpectralDensity& spectrum,
                           std::span<const FilterFunction> filters, double upper) {
  if (filters.empty()) {
    fail(ErrorCode::kCalibrationImpossible, "calibration needs at least one filter");
  }
  std::vector<double> overlaps;
  overlaps.reserve(filters.size());
  const auto samples = spectrum.sample_until(filters.front().grid(), upper);
  for (const auto& f : filters) {
    if (!(f.grid() == filters.front().grid())) {
      fail(ErrorCode::kGridMismatch, "calibration filters must share one grid");
    }
    overlaps.push_back(signal_overlap(samples, f, upper));
  }
  std::sort(overlaps.begin(), overlaps.end());
  const std::size_t n = overlaps.size();
  const double median = (n % 2 == 1) ? overlaps[n / 2]
                                     : 0.5 * (overlaps[n / 2 - 1] + overlaps[n / 2]);
  if (!(median > 0.0)) {
    fail(ErrorCode::kCalibrationImpossible,
         "median filter overlap with the spectrum is zero; cannot calibrate");
  }
  return spectrum.scale() / median;
}

SpectralDensity single_peak_spectrum(double s0) {
  return SpectralDensity::lorentzian_mixture({{1.0, 2.0, 1.0}}, s0);
}

SpectralDensity double_peak_spectrum(double s0) {
  return SpectralDensity::lorentzian_mixture({{1.0, 2.0, 1.0}, {0.7, 6.0, 2.0}}, s0);
}

SpectralDensity leakage_spectrum(double s0) {
  return SpectralDensity::lorentzian_mixture(
      {{1.0, 2.0, 1.0}, {0.7, 6.0, 2.0}, {5.0, 20.0, 1.0}}, s0);
}

}  // namespace noisespec
