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

#include "noisespec/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "noisespec/error.hpp"
#include "noisespec/quadrature.hpp"
#include "noisespec/special.hpp"

namespace noisespec {

namespace {

constexpr double kFourOverPi = 4.0 / std::numbers::pi;

// Boundaries of the summed modulation and the jump of y across each one,
// counting the switch-on at 0 and switch-off at T:
//   Y(omega) = (1 / (i omega)) sum_j jump_j exp(i omega tau_j)
struct Jumps {
  std::vector<double> times;
  std::vector<double> sizes;
};

Jumps jumps_of(const ModulationSet& set) {
  const auto segments = set.segments();
  Jumps j;
  j.times.reserve(segments.size() + 1);
  j.sizes.reserve(segments.size() + 1);
  j.times.push_back(0.0);
  j.sizes.push_back(-static_cast<double>(segments.front().level));
  for (std::size_t s = 1; s < segments.size(); ++s) {
    j.times.push_back(segments[s].begin);
    j.sizes.push_back(static_cast<double>(segments[s - 1].level - segments[s].level));
  }
  j.times.push_back(set.duration());
  j.sizes.push_back(static_cast<double>(segments.back().level));
  return j;
}

// sum_j w_j exp(i omega_k tau_j) on every grid frequency. The phasor of each
// tau_j advances by a fixed rotation per grid step and is re-synchronised
// periodically to keep rounding drift far below quadrature error.
std::vector<std::complex<double>> phasor_sums(std::span<const double> taus,
                                              std::span<const std::complex<double>> weights,
                                              const FrequencyGrid& grid) {
  constexpr std::size_t kResync = 128;
  const std::size_t m = grid.size();
  const double step = grid.step();
  std::vector<std::complex<double>> out(m, {0.0, 0.0});
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const double tau = taus[j];
    const std::complex<double> rotation = std::polar(1.0, step * tau);
    std::complex<double> phasor = weights[j];
    for (std::size_t k = 0; k < m; ++k) {
      if (k % kResync == 0) phasor = weights[j] * std::polar(1.0, grid[k] * tau);
      out[k] += phasor;
      phasor *= rotation;
    }
  }
  return out;
}

// Two real weight sets over the same nodes share one phasor recurrence.
void dual_phasor_sums(std::span<const double> taus, std::span<const double> a,
                      std::span<const double> b, const FrequencyGrid& grid,
                      std::vector<std::complex<double>>& out_a,
                      std::vector<std::complex<double>>& out_b) {
  constexpr std::size_t kResync = 128;
  const std::size_t m = grid.size();
  const double step = grid.step();
  std::vector<double> ar(m, 0.0), ai(m, 0.0), br(m, 0.0), bi(m, 0.0);
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const double tau = taus[j];
    const double rc = std::cos(step * tau);
    const double rs = std::sin(step * tau);
    const double wa = a[j];
    const double wb = b[j];
    for (std::size_t k0 = 0; k0 < m; k0 += kResync) {
      double pc = std::cos(grid[k0] * tau);
      double ps = std::sin(grid[k0] * tau);
      const std::size_t k1 = std::min(m, k0 + kResync);
      for (std::size_t k = k0; k < k1; ++k) {
        ar[k] += wa * pc;
        ai[k] += wa * ps;
        br[k] += wb * pc;
        bi[k] += wb * ps;
        const double nc = pc * rc - ps * rs;
        ps = pc * rs + ps * rc;
        pc = nc;
      }
    }
  }
  out_a.resize(m);
  out_b.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    out_a[k] = {ar[k], ai[k]};
    out_b[k] = {br[k], bi[k]};
  }
}

std::complex<double> small_frequency_transform(const ModulationSet& set, double omega) {
  std::complex<double> y{0.0, 0.0};
  const std::complex<double> i{0.0, 1.0};
  for (const auto& s : set.segments()) {
    const double a = s.begin;
    const double b = s.end;
    y += static_cast<double>(s.level) *
         ((b - a) + i * omega * (b * b - a * a) / 2.0 -
          omega * omega * (b * b * b - a * a * a) / 6.0);
  }
  return y;
}

std::vector<double> piecewise_filter_values(const ModulationSet& set,
                                            const FrequencyGrid& grid) {
  const Jumps j = jumps_of(set);
  std::vector<std::complex<double>> w(j.sizes.begin(), j.sizes.end());
  const auto sums = phasor_sums(j.times, w, grid);
  std::vector<double> values(grid.size());
  const double duration = set.duration();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double omega = grid[k];
    if (omega * duration < 1e-6) {
      values[k] = kFourOverPi * std::norm(small_frequency_transform(set, omega));
    } else {
      values[k] = kFourOverPi * std::norm(sums[k]) / (omega * omega);
    }
  }
  return values;
}

// Composite Simpson on shared nodes for all requested frequencies; the panel
// count doubles until the n and n/2 rules agree within `tolerance`.
std::vector<ContinuousTransform> continuous_transforms(const ContinuousModulation& mod,
                                                       const FrequencyGrid& grid,
                                                       double tolerance) {
  const double duration = mod.duration();
  const double top_rate = mod.max_phase_rate() + grid.max();
  std::size_t panels = static_cast<std::size_t>(
      std::ceil(duration * std::max(top_rate, 1.0) / 0.1));
  panels = std::max<std::size_t>(64, panels + (panels % 4 == 0 ? 0 : 4 - panels % 4));
  for (int round = 0;; ++round) {
    const double h = duration / static_cast<double>(panels);
    std::vector<double> taus(panels + 1);
    std::vector<double> wy(panels + 1);
    std::vector<double> wz(panels + 1);
    const std::size_t half = panels / 2;
    std::vector<double> taus_half(half + 1);
    std::vector<double> wy_half(half + 1);
    std::vector<double> wz_half(half + 1);
    for (std::size_t m = 0; m <= panels; ++m) {
      const double t = std::min(duration, h * static_cast<double>(m));
      taus[m] = t;
      const double phi = mod.phase(t);
      const double weight =
          (m == 0 || m == panels) ? 1.0 : (m % 2 == 1 ? 4.0 : 2.0);
      wy[m] = weight * h / 3.0 * std::cos(phi);
      wz[m] = weight * h / 3.0 * std::sin(phi);
      if (m % 2 == 0) {
        // The n/2-panel rule reuses every second node.
        const std::size_t mh = m / 2;
        const double wh = (mh == 0 || mh == half) ? 1.0 : (mh % 2 == 1 ? 4.0 : 2.0);
        taus_half[mh] = t;
        wy_half[mh] = wh * 2.0 * h / 3.0 * std::cos(phi);
        wz_half[mh] = wh * 2.0 * h / 3.0 * std::sin(phi);
      }
    }
    std::vector<std::complex<double>> y, z, yh, zh;
    dual_phasor_sums(taus, wy, wz, grid, y, z);
    dual_phasor_sums(taus_half, wy_half, wz_half, grid, yh, zh);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      worst = std::max({worst, std::abs(y[k] - yh[k]), std::abs(z[k] - zh[k])});
    }
    if (worst <= 15.0 * tolerance || round >= 8) {
      std::vector<ContinuousTransform> out(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k) out[k] = {y[k], z[k]};
      return out;
    }
    panels *= 2;
  }
}

double default_tolerance(double duration) { return 1e-8 * duration; }

}  // namespace

double modulation_duration(const Modulation& modulation) {
  return std::visit([](const auto& m) { return m.duration(); }, modulation);
}

std::complex<double> fourier_transform(const ModulationSet& set, double omega) {
  if (!(omega >= 0.0)) fail(ErrorCode::kRange, "transform frequency must be >= 0");
  if (omega * set.duration() < 1e-6) return small_frequency_transform(set, omega);
  const Jumps j = jumps_of(set);
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t k = 0; k < j.times.size(); ++k) {
    sum += j.sizes[k] * std::polar(1.0, omega * j.times[k]);
  }
  return sum / std::complex<double>(0.0, omega);
}

ContinuousTransform fourier_transform(const ContinuousModulation& modulation,
                                      double omega, double tolerance) {
  if (!(omega >= 0.0)) fail(ErrorCode::kRange, "transform frequency must be >= 0");
  if (tolerance <= 0.0) tolerance = default_tolerance(modulation.duration());
  // A one-point "grid" is not representable, so integrate on {0, omega} and
  // keep the second entry; omega == 0 uses a tiny grid end instead.
  const double top = omega > 0.0 ? omega : 1e-300;
  return continuous_transforms(modulation, FrequencyGrid(top, 2), tolerance)[omega > 0.0 ? 1 : 0];
}

double filter_value(const Modulation& modulation, double omega) {
  if (const auto* set = std::get_if<ModulationSet>(&modulation)) {
    return kFourOverPi * std::norm(fourier_transform(*set, omega));
  }
  const auto t = fourier_transform(std::get<ContinuousModulation>(modulation), omega);
  return kFourOverPi * (std::norm(t.y) + std::norm(t.z));
}

FilterFunction::FilterFunction(FrequencyGrid grid, std::vector<double> values,
                               Modulation generator)
    : grid_(grid), values_(std::move(values)), generator_(std::move(generator)) {
  if (values_.size() != grid_.size()) {
    fail(ErrorCode::kInvalidArgument, "filter values do not match the grid size");
  }
}

FilterFunction filter_function(const Modulation& modulation, const FrequencyGrid& grid) {
  if (const auto* set = std::get_if<ModulationSet>(&modulation)) {
    return FilterFunction(grid, piecewise_filter_values(*set, grid), modulation);
  }
  const auto& mod = std::get<ContinuousModulation>(modulation);
  const auto transforms = continuous_transforms(mod, grid, default_tolerance(mod.duration()));
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = kFourOverPi * (std::norm(transforms[k].y) + std::norm(transforms[k].z));
  }
  return FilterFunction(grid, std::move(values), modulation);
}

double integrate(std::span<const double> samples, const FrequencyGrid& grid, double upper) {
  if (samples.size() != grid.size()) {
    fail(ErrorCode::kInvalidArgument, "sample count does not match the grid");
  }
  if (!(upper >= 0.0) || upper > grid.max() * (1.0 + 1e-12)) {
    fail(ErrorCode::kRange, "integration limit " + std::to_string(upper) +
                                " exceeds the grid range " + std::to_string(grid.max()));
  }
  const double step = grid.step();
  const double position = upper / step;
  std::size_t last = static_cast<std::size_t>(std::floor(position + 1e-9));
  last = std::min(last, grid.size() - 1);
  double total = trapezoid(samples.first(last + 1), step);
  const double rest = upper - grid[last];
  if (rest > 1e-12 * step && last + 1 < grid.size()) {
    const double u = rest / step;
    const double end = (1.0 - u) * samples[last] + u * samples[last + 1];
    total += 0.5 * rest * (samples[last] + end);
  }
  return total;
}

double integrate(std::span<const double> samples, const FrequencyGrid& grid, double lower,
                 double upper) {
  return integrate(samples, grid, upper) - integrate(samples, grid, lower);
}

Eigen::MatrixXd overlap_matrix(std::span<const FilterFunction> filters, double cutoff) {
  const std::size_t k = filters.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                            static_cast<Eigen::Index>(k));
  if (k == 0) return a;
  const FrequencyGrid& grid = filters.front().grid();
  for (const auto& f : filters) {
    if (!(f.grid() == grid)) fail(ErrorCode::kGridMismatch, "filters do not share one grid");
  }
  std::vector<double> product(grid.size());
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = r; c < k; ++c) {
      const auto& fr = filters[r].values();
      const auto& fc = filters[c].values();
      for (std::size_t i = 0; i < product.size(); ++i) product[i] = fr[i] * fc[i];
      const double v = integrate(product, grid, cutoff);
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      a(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = v;
    }
  }
  return a;
}

double signal_overlap(std::span<const double> spectrum_samples, const FilterFunction& filter,
                      double upper) {
  const auto& f = filter.values();
  if (spectrum_samples.size() != f.size()) {
    fail(ErrorCode::kGridMismatch, "spectrum samples do not match the filter grid");
  }
  std::vector<double> product(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) product[i] = spectrum_samples[i] * f[i];
  return integrate(product, filter.grid(), upper);
}

double signal_overlap(const SpectralDensity& spectrum, const FilterFunction& filter,
                      double upper) {
  return signal_overlap(spectrum.sample_until(filter.grid(), upper), filter, upper);
}

double continuous_norm(std::span<const double> samples, const FrequencyGrid& grid,
                       double cutoff) {
  std::vector<double> sq(samples.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = samples[i] * samples[i];
  return std::sqrt(integrate(sq, grid, cutoff));
}

double continuous_norm(const FilterFunction& filter, double cutoff) {
  return continuous_norm(filter.values(), filter.grid(), cutoff);
}

double continuous_norm(const SpectralDensity& spectrum, const FrequencyGrid& grid,
                       double cutoff) {
  return continuous_norm(spectrum.sample_until(grid, cutoff), grid, cutoff);
}

double tail_bound(const ModulationSet& set, double upper) {
  if (!(upper > 0.0)) fail(ErrorCode::kDomain, "tail bound needs a positive frequency");
  double variation = 0.0;
  for (double s : jumps_of(set).sizes) variation += std::abs(s);
  return kFourOverPi * variation * variation / upper;
}

double exact_tail(const ModulationSet& set, double upper) {
  if (!(upper > 0.0)) fail(ErrorCode::kDomain, "tail integral needs a positive frequency");
  const Jumps j = jumps_of(set);
  // int_upper^inf cos(omega d) / omega^2 d omega
  auto kernel = [upper](double d) {
    d = std::abs(d);
    if (d == 0.0) return 1.0 / upper;
    return std::cos(upper * d) / upper -
           d * (std::numbers::pi / 2.0 - sine_integral(upper * d));
  };
  std::vector<double> terms;
  terms.reserve(j.times.size() * j.times.size());
  for (std::size_t a = 0; a < j.times.size(); ++a) {
    terms.push_back(j.sizes[a] * j.sizes[a] * kernel(0.0));
    for (std::size_t b = a + 1; b < j.times.size(); ++b) {
      terms.push_back(2.0 * j.sizes[a] * j.sizes[b] * kernel(j.times[a] - j.times[b]));
    }
  }
  return kFourOverPi * pairwise_sum(terms);
}

ParsevalCheck parseval_check(const ModulationSet& set, double max_step, double limit) {
  const double duration = set.duration();
  if (limit <= 0.0) limit = 200.0 / duration;
  const auto grid = FrequencyGrid::with_max_step(limit, max_step);
  const auto values = piecewise_filter_values(set, grid);
  ParsevalCheck check{};
  check.limit = limit;
  check.band_integral = integrate(values, grid, limit);
  check.tail = exact_tail(set, limit);
  double energy = 0.0;
  for (const auto& s : set.segments()) {
    energy += static_cast<double>(s.level * s.level) * (s.end - s.begin);
  }
  check.time_integral = 4.0 * energy;
  check.relative_error =
      std::abs(check.band_integral + check.tail - check.time_integral) / check.time_integral;
  return check;
}

}  // namespace noisespec
