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

#include "noisespec/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "noisespec/error.hpp"
#include "noisespec/quadrature.hpp"

namespace noisespec {

const char* to_string(Protocol protocol) {
  return protocol == Protocol::kFo ? "FO" : "AS";
}

RetentionRule RetentionRule::relative(double threshold) {
  RetentionRule r;
  r.mode = Mode::kThreshold;
  r.threshold = threshold;
  return r;
}

RetentionRule RetentionRule::largest(int count) {
  RetentionRule r;
  r.mode = Mode::kCount;
  r.count = count;
  return r;
}

RetentionRule RetentionRule::cross_validated() {
  RetentionRule r;
  r.mode = Mode::kCrossValidated;
  return r;
}

FoBasis fo_basis(const Eigen::MatrixXd& overlaps) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(overlaps);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kDegenerateBasis, "eigendecomposition of the overlap matrix failed");
  }
  const Eigen::Index n = overlaps.rows();
  FoBasis b;
  b.eigenvalues = solver.eigenvalues().reverse();
  b.rows.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    b.rows.row(k) = solver.eigenvectors().col(n - 1 - k).transpose();
  }
  return b;
}

std::vector<double> orthonormal_filter(const FoBasis& basis,
                                       std::span<const FilterFunction> filters,
                                       std::size_t k) {
  const auto row = static_cast<Eigen::Index>(k);
  const double norm = 1.0 / std::sqrt(basis.eigenvalues(row));
  std::vector<double> out(filters.front().values().size(), 0.0);
  for (std::size_t l = 0; l < filters.size(); ++l) {
    const double coeff = norm * basis.rows(row, static_cast<Eigen::Index>(l));
    const auto& f = filters[l].values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeff * f[i];
  }
  return out;
}

namespace {

int count_retained(const Eigen::VectorXd& eigenvalues, double threshold) {
  const double top = eigenvalues(0);
  int r = 0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    if (eigenvalues(k) > 0.0 && eigenvalues(k) >= threshold * top) ++r;
  }
  return r;
}

// Expansion weights w with estimate = sum_l w_l F_l:
//   w = V_R^T diag(1 / lambda) V_R c
Eigen::VectorXd expansion_weights(const FoBasis& basis, int retained,
                                  const Eigen::VectorXd& coefficients) {
  const auto top = basis.rows.topRows(retained);
  Eigen::VectorXd projected = top * coefficients;
  for (int k = 0; k < retained; ++k) projected(k) /= basis.eigenvalues(k);
  return top.transpose() * projected;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = m(idx[r], idx[c]);
  }
  return out;
}

// Leave-one-out choice of the relative eigenvalue threshold: each filter in
// turn is predicted from a basis built without it, and the candidate with
// the smallest summed squared prediction error wins. Ties keep the earlier
// (more aggressive) candidate.
double cross_validated_threshold(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                                 const std::vector<double>& candidates) {
  const Eigen::Index n = a.rows();
  if (n < 3 || candidates.empty()) return candidates.empty() ? 1e-4 : candidates.back();
  std::vector<double> residual(candidates.size(), 0.0);
  std::vector<int> rest;
  for (Eigen::Index j = 0; j < n; ++j) {
    rest.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) rest.push_back(static_cast<int>(i));
    }
    const Eigen::MatrixXd sub = submatrix(a, rest);
    const FoBasis basis = fo_basis(sub);
    if (!(basis.eigenvalues(0) > 0.0)) continue;
    Eigen::VectorXd held(static_cast<Eigen::Index>(rest.size()));
    Eigen::VectorXd cross(static_cast<Eigen::Index>(rest.size()));
    for (std::size_t i = 0; i < rest.size(); ++i) {
      held(static_cast<Eigen::Index>(i)) = c(rest[i]);
      cross(static_cast<Eigen::Index>(i)) = a(rest[i], j);
    }
    for (std::size_t t = 0; t < candidates.size(); ++t) {
      const int r = count_retained(basis.eigenvalues, candidates[t]);
      const double prediction = expansion_weights(basis, r, held).dot(cross);
      const double e = prediction - c(j);
      residual[t] += e * e;
    }
  }
  const auto best = std::min_element(residual.begin(), residual.end());
  return candidates[static_cast<std::size_t>(best - residual.begin())];
}

}  // namespace

FoInputs prepare_fo(std::shared_ptr<const std::vector<FilterFunction>> filters,
                    double cutoff, std::vector<double> points) {
  if (!filters || filters->empty()) fail(ErrorCode::kInvalidArgument, "no filters given");
  FoInputs in;
  in.cutoff = cutoff;
  in.overlaps = overlap_matrix(*filters, cutoff);
  in.point_values.resize(static_cast<Eigen::Index>(filters->size()),
                         static_cast<Eigen::Index>(points.size()));
  for (std::size_t l = 0; l < filters->size(); ++l) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      in.point_values(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(p)) =
          (*filters)[l].at(points[p]);
    }
  }
  in.points = std::move(points);
  in.filters = std::move(filters);
  return in;
}

ReconstructionResult fo_reconstruct(const FoInputs& inputs,
                                    std::span<const double> coefficients,
                                    std::span<const bool> saturated,
                                    const RetentionRule& rule, bool clamp_negative) {
  const auto& filters = *inputs.filters;
  const std::size_t k = filters.size();
  if (coefficients.size() != k || (!saturated.empty() && saturated.size() != k)) {
    fail(ErrorCode::kInvalidArgument, "coefficient count does not match the filters");
  }
  ReconstructionResult out;
  out.protocol = Protocol::kFo;
  out.filter_count = static_cast<int>(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (saturated.empty() || !saturated[i]) out.used_filters.push_back(static_cast<int>(i));
  }
  if (out.used_filters.empty()) {
    fail(ErrorCode::kDegenerateBasis, "every measurement saturated; nothing to expand");
  }
  const Eigen::MatrixXd a = submatrix(inputs.overlaps, out.used_filters);
  const auto n = static_cast<Eigen::Index>(out.used_filters.size());
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) c(i) = coefficients[out.used_filters[i]];

  const FoBasis basis = fo_basis(a);
  if (!(basis.eigenvalues(0) > 0.0)) {
    fail(ErrorCode::kDegenerateBasis, "overlap matrix has no positive eigenvalue");
  }
  int retained = 0;
  switch (rule.mode) {
    case RetentionRule::Mode::kThreshold:
      out.threshold = rule.threshold;
      retained = count_retained(basis.eigenvalues, rule.threshold);
      break;
    case RetentionRule::Mode::kCount:
      retained = std::min<int>(rule.count, count_retained(basis.eigenvalues, 0.0));
      out.threshold = retained > 0 ? basis.eigenvalues(retained - 1) / basis.eigenvalues(0) : 1.0;
      break;
    case RetentionRule::Mode::kCrossValidated:
      out.threshold = cross_validated_threshold(a, c, rule.candidates);
      retained = count_retained(basis.eigenvalues, out.threshold);
      break;
  }
  if (retained < 1) fail(ErrorCode::kDegenerateBasis, "no eigenvalue passes the retention rule");
  out.retained = retained;
  out.eigenvalues.assign(basis.eigenvalues.data(), basis.eigenvalues.data() + n);

  const Eigen::VectorXd w = expansion_weights(basis, retained, c);
  out.weights.assign(w.data(), w.data() + n);

  const FrequencyGrid& grid = filters.front().grid();
  out.grid_step = grid.step();
  const auto last = std::min<std::size_t>(
      grid.size() - 1, static_cast<std::size_t>(std::floor(inputs.cutoff / grid.step() + 1e-9)));
  out.grid_values.assign(last + 1, 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& f = filters[static_cast<std::size_t>(out.used_filters[j])].values();
    for (std::size_t i = 0; i <= last; ++i) out.grid_values[i] += w(j) * f[i];
  }
  out.point_frequencies = inputs.points;
  out.point_values.assign(inputs.points.size(), 0.0);
  for (std::size_t p = 0; p < inputs.points.size(); ++p) {
    double v = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      v += w(j) * inputs.point_values(out.used_filters[j], static_cast<Eigen::Index>(p));
    }
    out.point_values[p] = v;
  }
  if (clamp_negative) {
    for (double& v : out.grid_values) v = std::max(0.0, v);
    for (double& v : out.point_values) v = std::max(0.0, v);
  }
  return out;
}

ReconstructionResult fo_reconstruct(std::span<const FilterFunction> filters,
                                    std::span<const double> coefficients, double cutoff,
                                    const RetentionRule& rule, std::span<const double> points) {
  auto shared = std::make_shared<const std::vector<FilterFunction>>(filters.begin(), filters.end());
  const FoInputs in = prepare_fo(shared, cutoff, {points.begin(), points.end()});
  return fo_reconstruct(in, coefficients, {}, rule);
}

AsInputs prepare_as(std::span<const FilterFunction> filters, double omega_max, AsMethod method) {
  if (filters.empty()) fail(ErrorCode::kInvalidArgument, "no filters given");
  const int k = static_cast<int>(filters.size());
  AsInputs in;
  in.method = method;
  in.points = fidelity_points(omega_max, k);
  const double width = omega_max / k;
  in.bins.resize(k, k);
  in.areas.resize(filters.size());
  for (int r = 0; r < k; ++r) {
    const auto& f = filters[static_cast<std::size_t>(r)];
    in.areas[static_cast<std::size_t>(r)] = integrate(f.values(), f.grid(), f.grid().max());
    for (int l = 0; l < k; ++l) {
      const double centre = in.points[static_cast<std::size_t>(l)];
      in.bins(r, l) = integrate(f.values(), f.grid(), centre - 0.5 * width, centre + 0.5 * width);
    }
  }
  return in;
}

ReconstructionResult as_reconstruct(const AsInputs& inputs, std::span<const double> coefficients,
                                    std::span<const bool> saturated) {
  const auto k = static_cast<std::size_t>(inputs.bins.rows());
  if (coefficients.size() != k || (!saturated.empty() && saturated.size() != k)) {
    fail(ErrorCode::kInvalidArgument, "coefficient count does not match the filters");
  }
  ReconstructionResult out;
  out.protocol = Protocol::kAs;
  out.filter_count = static_cast<int>(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (saturated.empty() || !saturated[i]) out.used_filters.push_back(static_cast<int>(i));
  }
  out.point_frequencies = inputs.points;
  out.point_values.assign(k, 0.0);
  out.retained = static_cast<int>(k);

  if (inputs.method == AsMethod::kDelta) {
    if (out.used_filters.size() != k) {
      fail(ErrorCode::kIllConditioned, "a saturated filter leaves its point undetermined");
    }
    for (std::size_t i = 0; i < k; ++i) out.point_values[i] = coefficients[i] / inputs.areas[i];
    out.condition_number = 1.0;
    return out;
  }

  const auto rows = static_cast<Eigen::Index>(out.used_filters.size());
  Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(k));
  Eigen::VectorXd c(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    m.row(r) = inputs.bins.row(out.used_filters[r]);
    c(r) = coefficients[out.used_filters[r]];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smallest = rows < static_cast<Eigen::Index>(k) ? 0.0 : sv(sv.size() - 1);
  out.condition_number =
      smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
  if (!(out.condition_number <= 1e12)) {
    fail(ErrorCode::kIllConditioned,
         "binned inversion matrix is rank deficient (condition number " +
             std::to_string(out.condition_number) + ")");
  }
  const Eigen::VectorXd s = svd.solve(c);
  for (std::size_t i = 0; i < k; ++i) out.point_values[i] = s(static_cast<Eigen::Index>(i));
  return out;
}

ReconstructionResult as_reconstruct(std::span<const FilterFunction> filters,
                                    std::span<const double> coefficients, double omega_max,
                                    AsMethod method) {
  return as_reconstruct(prepare_as(filters, omega_max, method), coefficients, {});
}

double fidelity(std::span<const double> truth, std::span<const double> estimate) {
  if (truth.size() != estimate.size() || truth.empty()) {
    fail(ErrorCode::kInvalidArgument, "fidelity needs two equally long non-empty lists");
  }
  std::vector<double> cross(truth.size());
  std::vector<double> tt(truth.size());
  std::vector<double> ee(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    cross[i] = truth[i] * estimate[i];
    tt[i] = truth[i] * truth[i];
    ee[i] = estimate[i] * estimate[i];
  }
  const double nt = pairwise_sum(tt);
  const double ne = pairwise_sum(ee);
  if (!(nt > 0.0) || !(ne > 0.0)) {
    fail(ErrorCode::kUndefinedFidelity, "fidelity is undefined for a zero spectrum");
  }
  const double f = pairwise_sum(cross) / std::sqrt(nt * ne);
  return std::clamp(f, -1.0, 1.0);
}

double fidelity(const SpectralDensity& truth, const ReconstructionResult& result) {
  std::vector<double> t(result.point_frequencies.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = truth(result.point_frequencies[i]);
  return fidelity(t, result.point_values);
}

std::vector<double> fidelity_points(double omega_top, int count) {
  if (count < 1) fail(ErrorCode::kInvalidArgument, "need at least one fidelity point");
  std::vector<double> p(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) p[static_cast<std::size_t>(k - 1)] = omega_top * k / count;
  return p;
}

}  // namespace noisespec
