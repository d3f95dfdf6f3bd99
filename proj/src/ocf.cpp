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

#include "noisespec/ocf.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "noisespec/error.hpp"
#include "noisespec/optimize.hpp"
#include "noisespec/rng.hpp"

namespace noisespec {

FrequencyGrid OcfProblem::grid() const {
  return FrequencyGrid::with_max_step(grid_max > 0.0 ? grid_max : 3.0 * cutoff, grid_step);
}

void OcfProblem::validate() const {
  if (qubits < 0) fail(ErrorCode::kInvalidArgument, "qubit count must be >= 0");
  if (!(duration > 0.0)) fail(ErrorCode::kInvalidArgument, "duration must be positive");
  if (!(cutoff > 0.0)) fail(ErrorCode::kInvalidArgument, "cutoff must be positive");
  if (superiterations < 0 || inner_evaluations < 0) {
    fail(ErrorCode::kInvalidArgument, "optimizer budget must be non-negative");
  }
  if (basis_size < 1 || basis_size > 4) {
    fail(ErrorCode::kInvalidArgument, "basis size must lie in [1, 4] (at most 8 coefficients)");
  }
  if (!(penalty_weight >= 0.0)) fail(ErrorCode::kInvalidArgument, "penalty weight must be >= 0");
  if (grid().max() < cutoff) fail(ErrorCode::kRange, "optimizer grid ends below the cutoff");
}

namespace {

// 4 int (y^2 + z^2) dt, i.e. the integral of F over [0, infinity).
double total_filter_energy(const Modulation& m) {
  if (const auto* set = std::get_if<ModulationSet>(&m)) {
    double e = 0.0;
    for (const auto& s : set->segments()) {
      e += static_cast<double>(s.level * s.level) * (s.end - s.begin);
    }
    return 4.0 * e;
  }
  return 4.0 * std::get<ContinuousModulation>(m).duration();
}

// Target samples and norm cached for repeated objective evaluations.
class Evaluator {
 public:
  explicit Evaluator(const OcfProblem& p)
      : problem_(p), grid_(p.grid()), target_(p.target.sample(grid_)) {
    in_band_target_ = p.target.sample_until(grid_, p.cutoff);
    target_norm_ = continuous_norm(target_, grid_, p.cutoff);
  }

  const FrequencyGrid& grid() const { return grid_; }
  const std::vector<double>& target() const { return target_; }

  ObjectiveValue operator()(const Modulation& m) {
    ++evaluations;
    return evaluate(filter_function(m, grid_));
  }

  ObjectiveValue evaluate(const FilterFunction& f) const {
    const double cutoff = problem_.cutoff;
    const double norm = continuous_norm(f, cutoff);
    if (!(norm > 0.0)) fail(ErrorCode::kUndefinedObjective, "filter vanishes on [0, cutoff]");
    ObjectiveValue v;
    if (problem_.out_of_band == OutOfBand::kTruncate) {
      v.xi = signal_overlap(in_band_target_, f, cutoff) / norm;
    } else {
      v.xi = signal_overlap(target_, f, grid_.max()) / norm;
    }
    v.fidelity = v.xi / target_norm_;
    const double in_band = integrate(f.values(), grid_, cutoff);
    v.out_of_band_fraction = std::max(0.0, 1.0 - in_band / total_filter_energy(f.generator()));
    v.objective = v.xi;
    if (problem_.out_of_band == OutOfBand::kPenalty) {
      v.objective -= problem_.penalty_weight * target_norm_ * v.out_of_band_fraction;
    }
    return v;
  }

  int evaluations = 0;

 private:
  const OcfProblem& problem_;
  FrequencyGrid grid_;
  std::vector<double> target_;
  std::vector<double> in_band_target_;
  double target_norm_ = 0.0;
};

double dominant_frequency(const Evaluator& e, double cutoff) {
  const auto& t = e.target();
  std::size_t best = 0;
  for (std::size_t i = 0; i < t.size() && e.grid()[i] <= cutoff; ++i) {
    if (t[i] > t[best]) best = i;
  }
  return e.grid()[best];
}

std::vector<double> repaired(std::vector<double> times, double duration) {
  const double lo = 1e-9 * duration;
  const double hi = duration * (1.0 - 1e-9);
  for (double& t : times) t = std::clamp(t, lo, hi);
  std::sort(times.begin(), times.end());
  // Two flips at the same instant cancel.
  std::vector<double> out;
  for (double t : times) {
    if (!out.empty() && std::abs(out.back() - t) < 1e-12 * duration) {
      out.pop_back();
    } else {
      out.push_back(t);
    }
  }
  return out;
}

struct Basis {
  std::vector<double> frequencies;
};

Basis draw_basis(Rng& rng, int size, double cutoff) {
  // Uniform on (0, 1.2 cutoff]: 1 - U maps [0, 1) onto (0, 1].
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Basis b;
  for (int j = 0; j < size; ++j) b.frequencies.push_back(1.2 * cutoff * (1.0 - u(rng)));
  return b;
}

double basis_value(const Basis& b, const std::vector<double>& c, double t) {
  double v = 0.0;
  for (std::size_t j = 0; j < b.frequencies.size(); ++j) {
    v += c[2 * j] * std::sin(b.frequencies[j] * t) + c[2 * j + 1] * std::cos(b.frequencies[j] * t);
  }
  return v;
}

ModulationSet warped(const ModulationSet& base, const Basis& basis, const std::vector<double>& c,
                     int only_qubit) {
  std::vector<PulseSequence> seqs;
  const double duration = base.duration();
  for (std::size_t q = 0; q < base.qubit_count(); ++q) {
    const auto& s = base.sequences()[q];
    if (only_qubit >= 0 && static_cast<int>(q) != only_qubit) {
      seqs.push_back(s);
      continue;
    }
    std::vector<double> times = s.switch_times();
    for (double& t : times) t += basis_value(basis, c, t);
    seqs.emplace_back(repaired(std::move(times), duration), duration, s.initial_sign());
  }
  return ModulationSet(std::move(seqs));
}

}  // namespace

ObjectiveValue xi_objective(const FilterFunction& filter, const SpectralDensity& target,
                            double cutoff, OutOfBand mode, double penalty_weight) {
  OcfProblem p;
  p.target = target;
  p.cutoff = cutoff;
  p.out_of_band = mode;
  p.penalty_weight = penalty_weight;
  p.grid_max = filter.grid().max();
  p.grid_step = filter.grid().step();
  Evaluator e(p);
  if (!(e.grid() == filter.grid())) {
    // Re-sample the filter exactly on the evaluator grid when the spacing
    // rule rounded differently.
    return e.evaluate(filter_function(filter.generator(), e.grid()));
  }
  return e.evaluate(filter);
}

ModulationSet initial_guess(const OcfProblem& problem) {
  problem.validate();
  if (problem.continuous()) fail(ErrorCode::kInvalidArgument, "continuous problems have no staircase");
  Evaluator e(problem);
  return staircase_split(dominant_frequency(e, problem.cutoff), problem.qubits, problem.duration);
}

OcfSolution optimize_discrete(const OcfProblem& problem) {
  problem.validate();
  if (problem.continuous()) fail(ErrorCode::kInvalidArgument, "problem asks for a continuous control");
  Evaluator eval(problem);
  ModulationSet best =
      staircase_split(dominant_frequency(eval, problem.cutoff), problem.qubits, problem.duration);
  ObjectiveValue best_value = eval(best);
  OcfSolution out{best, best_value, 0, {best_value.objective}};

  SimplexOptions opts;
  opts.max_evaluations = problem.inner_evaluations;
  opts.initial_step = 0.1;
  const int n = problem.qubits;
  for (int s = 0; s < problem.superiterations; ++s) {
    Rng rng = make_rng(problem.seed, static_cast<std::uint64_t>(s));
    const Basis basis = draw_basis(rng, problem.basis_size, problem.cutoff);
    const int only = (n == 1 || s % 2 == 0) ? -1 : (s / 2) % n;
    std::vector<double> start(2 * basis.frequencies.size(), 0.0);
    const ModulationSet anchor = best;
    auto cost = [&](const std::vector<double>& c) {
      return -eval(warped(anchor, basis, c, only)).objective;
    };
    const SimplexResult r = nelder_mead(cost, start, opts);
    if (-r.value > best_value.objective) {
      best = warped(anchor, basis, r.point, only);
      best_value = eval(best);
    }
    out.trace.push_back(best_value.objective);
  }
  out.modulation = best;
  out.value = best_value;
  out.evaluations = eval.evaluations;
  return out;
}

OcfSolution optimize_continuous(const OcfProblem& problem) {
  problem.validate();
  Evaluator eval(problem);
  const double duration = problem.duration;
  ContinuousModulation best(duration, 0.0, -dominant_frequency(eval, problem.cutoff));
  ObjectiveValue best_value = eval(best);
  OcfSolution out{best, best_value, 0, {best_value.objective}};

  SimplexOptions opts;
  opts.max_evaluations = problem.inner_evaluations;
  opts.initial_step = 0.3;
  for (int s = 0; s < problem.superiterations; ++s) {
    Rng rng = make_rng(problem.seed, static_cast<std::uint64_t>(s));
    const Basis basis = draw_basis(rng, problem.basis_size, problem.cutoff);
    const ContinuousModulation anchor = best;
    auto candidate = [&](const std::vector<double>& c) {
      auto terms = anchor.terms();
      for (std::size_t j = 0; j < basis.frequencies.size(); ++j) {
        terms.push_back({basis.frequencies[j], c[2 * j + 1], c[2 * j]});
      }
      return ContinuousModulation(duration, anchor.offset(), anchor.ramp(), std::move(terms));
    };
    auto cost = [&](const std::vector<double>& c) { return -eval(candidate(c)).objective; };
    std::vector<double> start(2 * basis.frequencies.size(), 0.0);
    const SimplexResult r = nelder_mead(cost, start, opts);
    if (-r.value > best_value.objective) {
      best = candidate(r.point);
      best_value = eval(best);
    }
    out.trace.push_back(best_value.objective);
  }
  out.modulation = best;
  out.value = best_value;
  out.evaluations = eval.evaluations;
  return out;
}

OcfSolution optimize_filter(const OcfProblem& problem) {
  return problem.continuous() ? optimize_continuous(problem) : optimize_discrete(problem);
}

double alignment_residual(const FilterFunction& filter, const SpectralDensity& target,
                          double cutoff) {
  const auto s = target.sample_until(filter.grid(), cutoff);
  const double fn = continuous_norm(filter, cutoff);
  const double sn = continuous_norm(s, filter.grid(), cutoff);
  std::vector<double> diff(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) diff[i] = filter[i] / fn - s[i] / sn;
  return continuous_norm(diff, filter.grid(), cutoff);
}

}  // namespace noisespec
