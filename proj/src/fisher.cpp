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

#include "noisespec/fisher.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/SVD>

#include "noisespec/error.hpp"
#include "noisespec/parallel.hpp"
#include "noisespec/probe.hpp"
#include "noisespec/quadrature.hpp"
#include "noisespec/rng.hpp"

namespace noisespec {

double fisher_weight(double p, FisherWeighting weighting) {
  if (!(p > 0.0 && p < 1.0)) return std::numeric_limits<double>::infinity();
  if (weighting == FisherWeighting::kPublished) return (1.0 - p) / p;
  const double slope = 0.5 - p;
  return slope * slope / (p * (1.0 - p));
}

FisherOperator build_fio(std::span<const FilterFunction> filters,
                         std::span<const double> probabilities, FisherWeighting weighting,
                         double shots) {
  if (filters.size() != probabilities.size()) {
    fail(ErrorCode::kInvalidArgument, "one probability per filter is required");
  }
  if (!(shots > 0.0)) fail(ErrorCode::kInvalidArgument, "shot count must be positive");
  FisherOperator fio;
  fio.weighting = weighting;
  fio.shots = shots;
  for (std::size_t k = 0; k < filters.size(); ++k) {
    const double w = fisher_weight(probabilities[k], weighting);
    if (!std::isfinite(w)) {
      fio.excluded.push_back(static_cast<int>(k));
      continue;
    }
    if (!fio.directions.empty() && !(filters[k].grid() == fio.directions.front().grid())) {
      fail(ErrorCode::kGridMismatch, "information directions must share one grid");
    }
    fio.directions.push_back(filters[k]);
    fio.weights.push_back(w);
    fio.kept.push_back(static_cast<int>(k));
  }
  if (fio.directions.empty()) {
    fail(ErrorCode::kEmptyOperator, "every probability lies outside (0, 1)");
  }
  return fio;
}

FisherOperator merge(const FisherOperator& a, const FisherOperator& b) {
  if (a.weighting != b.weighting || a.shots != b.shots) {
    fail(ErrorCode::kInvalidArgument, "merged operators need equal weighting and shots");
  }
  FisherOperator out = a;
  const int offset = static_cast<int>(a.kept.size() + a.excluded.size());
  for (std::size_t i = 0; i < b.directions.size(); ++i) {
    out.directions.push_back(b.directions[i]);
    out.weights.push_back(b.weights[i]);
    out.kept.push_back(offset + b.kept[i]);
  }
  for (int e : b.excluded) out.excluded.push_back(offset + e);
  return out;
}

double directional_fisher(const FisherOperator& fio, std::span<const double> samples,
                          double upper) {
  std::vector<double> terms;
  terms.reserve(fio.directions.size());
  for (std::size_t k = 0; k < fio.directions.size(); ++k) {
    const double d = signal_overlap(samples, fio.directions[k], upper);
    terms.push_back(fio.weights[k] * d * d);
  }
  return fio.shots * pairwise_sum(terms);
}

double directional_fisher(const FisherOperator& fio, const SpectralDensity& direction,
                          double upper) {
  const auto samples = direction.sample_until(fio.directions.front().grid(), upper);
  return directional_fisher(fio, samples, upper);
}

double cramer_rao(double information) {
  if (!(information > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(information);
}

double cramer_rao(const FisherOperator& fio, const SpectralDensity& direction, double upper) {
  return cramer_rao(directional_fisher(fio, direction, upper));
}

namespace {

// Rows sqrt(w_k) F_k scaled by the square-root trapezoid weights, so that
// row inner products are the weighted overlap integrals.
int weighted_rank(std::span<const FilterFunction> filters, std::span<const double> weights,
                  double upper, double tolerance) {
  if (filters.empty()) return 0;
  const FrequencyGrid& grid = filters.front().grid();
  const double step = grid.step();
  const auto last = std::min<std::size_t>(
      grid.size() - 1, static_cast<std::size_t>(std::floor(upper / step + 1e-9)));
  Eigen::MatrixXd m(static_cast<Eigen::Index>(last + 1),
                    static_cast<Eigen::Index>(filters.size()));
  for (std::size_t k = 0; k < filters.size(); ++k) {
    const double scale = std::sqrt(weights.empty() ? 1.0 : weights[k]);
    const auto& f = filters[k].values();
    for (std::size_t i = 0; i <= last; ++i) {
      const double trap = (i == 0 || i == last) ? 0.5 : 1.0;
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          scale * std::sqrt(trap * step) * f[i];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) >= tolerance * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace

int fio_rank(const FisherOperator& fio, double upper, double tolerance) {
  return weighted_rank(fio.directions, fio.weights, upper, tolerance);
}

int filter_rank(std::span<const FilterFunction> filters, double upper, double tolerance) {
  return weighted_rank(filters, {}, upper, tolerance);
}

double estimate_deviation(std::span<const double> coefficients,
                          std::span<const double> directions,
                          std::span<const std::uint64_t> counts, std::uint64_t shots,
                          double rate, double duration) {
  const std::size_t k = coefficients.size();
  if (directions.size() != k || counts.size() != k || shots == 0) {
    fail(ErrorCode::kInvalidArgument, "estimate_deviation needs matching inputs");
  }
  const double n = static_cast<double>(shots);
  const double offset = rate * duration;
  auto feasible = [&](double eps) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!(coefficients[i] + eps * directions[i] + offset > 0.0)) return false;
    }
    return true;
  };
  auto log_likelihood = [&](double eps) {
    double l = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double p = survival_probability(coefficients[i] + eps * directions[i], rate, duration);
      const double hit = static_cast<double>(counts[i]);
      if (hit > 0.0) l += hit * std::log(p);
      if (n - hit > 0.0) l += (n - hit) * std::log1p(-p);
    }
    return l;
  };
  // Fisher scoring with step halving; the expected information is positive
  // wherever the model is defined, so every step is an ascent direction.
  double eps = 0.0;
  double current = log_likelihood(eps);
  for (int iter = 0; iter < 100; ++iter) {
    double score = 0.0;
    double info = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double p = survival_probability(coefficients[i] + eps * directions[i], rate, duration);
      const double slope = 0.5 - p;
      const double hit = static_cast<double>(counts[i]);
      score += directions[i] * slope * (hit / p - (n - hit) / (1.0 - p));
      info += n * directions[i] * directions[i] * slope * slope / (p * (1.0 - p));
    }
    if (!(info > 0.0)) break;
    double step = score / info;
    bool moved = false;
    for (int h = 0; h < 60; ++h) {
      const double trial = eps + step;
      if (feasible(trial)) {
        const double value = log_likelihood(trial);
        if (value >= current) {
          eps = trial;
          current = value;
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved || std::abs(step) < 1e-14 * (1.0 + std::abs(eps))) break;
  }
  return eps;
}

DeviationStudy deviation_study(std::span<const double> coefficients,
                               std::span<const double> directions, std::uint64_t shots,
                               double rate, double duration, int repeats, std::uint64_t seed,
                               FisherWeighting weighting, int workers) {
  const std::size_t k = coefficients.size();
  DeviationStudy study;
  std::vector<double> info_terms;
  for (std::size_t i = 0; i < k; ++i) {
    const double p = survival_probability(coefficients[i], rate, duration);
    info_terms.push_back(fisher_weight(p, weighting) * directions[i] * directions[i]);
  }
  study.bound = cramer_rao(static_cast<double>(shots) * pairwise_sum(info_terms));

  const auto reps = static_cast<std::size_t>(std::max(0, repeats));
  study.estimates.assign(reps, 0.0);
  parallel_for(reps, workers, [&](std::size_t r) {
    std::vector<std::uint64_t> counts(k);
    for (std::size_t i = 0; i < k; ++i) {
      Rng rng = make_rng(split_seed(seed, r), i);
      std::binomial_distribution<std::uint64_t> draw(
          shots, survival_probability(coefficients[i], rate, duration));
      counts[i] = draw(rng);
    }
    study.estimates[r] = estimate_deviation(coefficients, directions, counts, shots, rate, duration);
  });
  if (reps > 1) {
    study.mean = pairwise_sum(study.estimates) / static_cast<double>(reps);
    std::vector<double> dev(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      dev[r] = (study.estimates[r] - study.mean) * (study.estimates[r] - study.mean);
    }
    study.spread = std::sqrt(pairwise_sum(dev) / static_cast<double>(reps - 1));
    study.spread_error = study.spread / std::sqrt(2.0 * static_cast<double>(reps - 1));
  }
  return study;
}

}  // namespace noisespec
