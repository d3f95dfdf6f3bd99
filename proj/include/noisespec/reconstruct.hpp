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
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "noisespec/filter.hpp"

namespace noisespec {

enum class Protocol { kFo, kAs };

const char* to_string(Protocol protocol);

/// Which eigen-directions of the overlap matrix survive truncation.
struct RetentionRule {
  enum class Mode {
    kThreshold,       // keep lambda_k >= threshold * lambda_1
    kCount,           // keep the `count` largest
    kCrossValidated,  // threshold picked per run by leave-one-out prediction
  };
  Mode mode = Mode::kThreshold;
  double threshold = 1e-4;
  int count = 0;
  std::vector<double> candidates = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 1e-5, 1e-6};

  static RetentionRule relative(double threshold);
  static RetentionRule largest(int count);
  static RetentionRule cross_validated();
};

/// Eigen-structure of A_kl = int_0^cutoff F_k F_l with eigenvalues sorted in
/// descending order; row k of `rows` is the k-th eigenvector.
struct FoBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd rows;
};

FoBasis fo_basis(const Eigen::MatrixXd& overlaps);

/// Grid samples of the k-th orthonormal filter (1/sqrt(lambda_k)) sum_l V_kl F_l.
std::vector<double> orthonormal_filter(const FoBasis& basis,
                                       std::span<const FilterFunction> filters,
                                       std::size_t k);

struct ReconstructionResult {
  Protocol protocol = Protocol::kFo;
  int filter_count = 0;
  int retained = 0;                   // FO eigen-directions kept, AS unknowns
  std::vector<int> used_filters;      // indices that were not saturated
  std::vector<double> eigenvalues;    // FO only, descending
  double threshold = 0.0;             // FO relative eigenvalue cut applied
  double condition_number = 0.0;      // AS only
  std::vector<double> weights;        // FO: estimate = sum_j weights_j F_used[j]
  double grid_step = 0.0;             // FO: estimate samples on [0, cutoff]
  std::vector<double> grid_values;
  std::vector<double> point_frequencies;  // fidelity points
  std::vector<double> point_values;
};

/// Data that depends only on the filter set and can be shared by every trial.
struct FoInputs {
  std::shared_ptr<const std::vector<FilterFunction>> filters;
  double cutoff = 0.0;
  Eigen::MatrixXd overlaps;        // K x K
  std::vector<double> points;      // fidelity frequencies
  Eigen::MatrixXd point_values;    // F_l(points_j), exact; K x P
};

FoInputs prepare_fo(std::shared_ptr<const std::vector<FilterFunction>> filters,
                    double cutoff, std::vector<double> points);

/// FO estimate from measured coefficients. Filters whose readout saturated are
/// dropped together with their coefficient before the basis is built.
ReconstructionResult fo_reconstruct(const FoInputs& inputs,
                                    std::span<const double> coefficients,
                                    std::span<const bool> saturated,
                                    const RetentionRule& rule,
                                    bool clamp_negative = false);

ReconstructionResult fo_reconstruct(std::span<const FilterFunction> filters,
                                    std::span<const double> coefficients,
                                    double cutoff, const RetentionRule& rule,
                                    std::span<const double> points);

enum class AsMethod { kBinned, kDelta };

struct AsInputs {
  AsMethod method = AsMethod::kBinned;
  std::vector<double> points;  // omega_max k / K
  Eigen::MatrixXd bins;        // bins(k, l) = int over bin l of F_k
  std::vector<double> areas;   // int over the full grid of F_k
};

AsInputs prepare_as(std::span<const FilterFunction> filters, double omega_max,
                    AsMethod method = AsMethod::kBinned);

/// Solves bins * s = c in the least-squares sense over unsaturated rows.
/// Throws kIllConditioned when the condition number exceeds 1e12.
ReconstructionResult as_reconstruct(const AsInputs& inputs,
                                    std::span<const double> coefficients,
                                    std::span<const bool> saturated);

ReconstructionResult as_reconstruct(std::span<const FilterFunction> filters,
                                    std::span<const double> coefficients,
                                    double omega_max,
                                    AsMethod method = AsMethod::kBinned);

/// Cosine similarity of two value lists; kUndefinedFidelity on a zero norm.
double fidelity(std::span<const double> truth, std::span<const double> estimate);

/// Fidelity of a result against an analytic truth at the result's points.
double fidelity(const SpectralDensity& truth, const ReconstructionResult& result);

/// omega_top k / K for k = 1..K.
std::vector<double> fidelity_points(double omega_top, int count);

}  // namespace noisespec
