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
#include <span>
#include <vector>

#include "noisespec/filter.hpp"
#include "noisespec/spectra.hpp"

namespace noisespec {

/// How each readout is weighted in the information operator.
enum class FisherWeighting {
  kPublished,       // (1 - p) / p
  kExactBernoulli,  // (dp/dchi)^2 / (p (1 - p)) with dp/dchi = 1/2 - p
};

/// Rank-K information operator kept in factored form: weights w_k and the
/// directions F_k (the derivative of chi_k with respect to S).
struct FisherOperator {
  FisherWeighting weighting = FisherWeighting::kPublished;
  std::vector<FilterFunction> directions;
  std::vector<double> weights;          // per retained direction, per shot
  std::vector<int> kept;                // original index of each direction
  std::vector<int> excluded;            // indices with p outside (0, 1)
  double shots = 1.0;                   // information scales linearly
};

double fisher_weight(double probability, FisherWeighting weighting);

/// Throws kEmptyOperator when every probability lies outside (0, 1).
FisherOperator build_fio(std::span<const FilterFunction> filters,
                         std::span<const double> probabilities,
                         FisherWeighting weighting = FisherWeighting::kPublished,
                         double shots = 1.0);

/// Directions of both operators side by side; information adds exactly.
FisherOperator merge(const FisherOperator& a, const FisherOperator& b);

/// <S|F|S> = shots * sum_k w_k (int_0^upper S F_k)^2
double directional_fisher(const FisherOperator& fio, const SpectralDensity& direction,
                          double upper);
double directional_fisher(const FisherOperator& fio, std::span<const double> direction_samples,
                          double upper);

/// 1 / sqrt(information); +infinity when the information vanishes.
double cramer_rao(double information);
double cramer_rao(const FisherOperator& fio, const SpectralDensity& direction, double upper);

/// Numerical rank of the weighted directions: singular values at least
/// `tolerance` times the largest one count.
int fio_rank(const FisherOperator& fio, double upper, double tolerance = 1e-10);

/// Rank of the plain overlap matrix of the filters under the same rule.
int filter_rank(std::span<const FilterFunction> filters, double upper,
                double tolerance = 1e-10);

/// Maximum-likelihood estimate of epsilon in chi_k = c_k + epsilon d_k from
/// binomial counts; `rate` and `duration` add the dephasing offset.
double estimate_deviation(std::span<const double> coefficients,
                          std::span<const double> directions,
                          std::span<const std::uint64_t> counts, std::uint64_t shots,
                          double rate, double duration);

struct DeviationStudy {
  double bound = 0.0;             // Cramer-Rao bound for the total shots
  double spread = 0.0;            // sample standard deviation of the estimates
  double spread_error = 0.0;      // standard error of that deviation
  double mean = 0.0;
  std::vector<double> estimates;
};

/// Repeats binomial experiments with `shots` per filter and estimates epsilon
/// along the direction each time (true epsilon = 0).
DeviationStudy deviation_study(std::span<const double> coefficients,
                               std::span<const double> directions, std::uint64_t shots,
                               double rate, double duration, int repeats,
                               std::uint64_t seed, FisherWeighting weighting, int workers = 1);

}  // namespace noisespec
