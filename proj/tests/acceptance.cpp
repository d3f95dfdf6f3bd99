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

// Acceptance suite: one line per criterion, PASS or FAIL with the numbers
// behind the verdict. Exit status is nonzero on any unexpected failure; a
// failure listed as known is reported but tolerated unless --strict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "noisespec/csv.hpp"
#include "noisespec/experiment.hpp"
#include "noisespec/filter.hpp"
#include "noisespec/presets.hpp"
#include "noisespec/probe.hpp"
#include "noisespec/reconstruct.hpp"

using namespace noisespec;

namespace {

int g_workers = 1;

struct Verdict {
  bool pass = true;
  bool known = false;  // failure documented as unattainable
  std::string detail;
};

class Notes {
 public:
  void add(const std::string& s) { out_ << (out_.tellp() > 0 ? "; " : "") << s; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double num(const ExperimentOutput& o, const std::string& key) { return std::stod(o.value(key)); }

ExperimentOutput run(ExperimentConfig c) {
  c.workers = g_workers;
  return run_experiment(c);
}

std::string gamma_key(const std::string& proto, int q, double rate) {
  return proto + ".n" + std::to_string(q) + ".gamma" + format_number(rate, 12);
}

// 1 ------------------------------------------------------------------------
Verdict in_span_exactness() {
  ProtocolSetup s;
  const auto f = protocol_filters(s);
  const auto a = overlap_matrix(f, s.cutoff);
  const auto points = fidelity_points(s.cutoff, 20);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(f.size());
    for (double& x : w) x = 0.05 + u(rng);
    std::vector<double> c(f.size(), 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) {
      for (std::size_t l = 0; l < f.size(); ++l) c[k] += a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) * w[l];
    }
    const auto r = fo_reconstruct(f, c, s.cutoff, RetentionRule::largest(20), points);
    double err = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < r.grid_values.size(); ++i) {
      double truth = 0.0;
      for (std::size_t l = 0; l < f.size(); ++l) truth += w[l] * f[l][i];
      err = std::max(err, std::abs(r.grid_values[i] - truth));
      peak = std::max(peak, std::abs(truth));
    }
    worst = std::max(worst, err / peak);
  }
  return {worst <= 1e-6, false, "20 combinations, worst relative error " + fmt(worst, 3) + " (limit 1e-6)"};
}

// 2 ------------------------------------------------------------------------
Verdict oracle_equivalence() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto grid = FrequencyGrid::with_max_step(400.0, 0.004);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Lorentzian> parts;
    const int n = 1 + static_cast<int>(3 * u(rng));
    for (int i = 0; i < n; ++i) parts.push_back({0.2 + 1.3 * u(rng), 10.0 * u(rng), 0.3 + 2.7 * u(rng)});
    const auto spectrum = SpectralDensity::lorentzian_mixture(parts);
    const double duration = 1.0 + 9.0 * u(rng);
    const int qubits = 1 + static_cast<int>(3 * u(rng));
    std::vector<PulseSequence> seqs;
    for (int q = 0; q < qubits; ++q) {
      std::vector<double> sw;
      for (double t = 0.0;;) {
        t += duration * (0.05 + 0.3 * u(rng));
        if (t >= duration) break;
        sw.push_back(t);
      }
      seqs.emplace_back(sw, duration);
    }
    const ModulationSet m(std::move(seqs));
    const double spectral = signal_overlap(spectrum, filter_function(m, grid), grid.max());
    const double oracle = chi_time_domain(m, spectrum);
    worst = std::max(worst, std::abs(spectral - oracle) / std::abs(oracle));
  }
  return {worst <= 1e-3, false, "20 random pairs, worst relative gap " + fmt(worst, 3) + " (limit 1e-3)"};
}

// 3 ------------------------------------------------------------------------
Verdict parseval() {
  std::size_t count = 0;
  double worst = 0.0;
  std::string where;
  for (const auto& p : list_presets()) {
    const auto c = preset_config(p.name);
    if (c.kind != ScenarioKind::kReconstruction) continue;
    for (const auto& plan : c.protocols) {
      for (std::size_t i = 0; i < plan.qubits.size(); ++i) {
        const auto durations =
            plan.durations_by_qubits.empty() ? plan.durations : std::vector<double>{plan.durations_by_qubits[i]};
        for (double t : durations) {
          ProtocolSetup s = plan.setup;
          s.qubits = plan.qubits[i];
          s.duration = t;
          for (const auto& f : protocol_filters(s)) {
            const auto check = parseval_check(std::get<ModulationSet>(f.generator()));
            ++count;
            if (check.relative_error > worst) {
              worst = check.relative_error;
              where = p.name;
            }
          }
        }
      }
    }
  }
  return {worst <= 5e-3, false,
          std::to_string(count) + " filters, worst relative error " + fmt(worst, 3) + " (" + where + ", limit 5e-3)"};
}

// 4 ------------------------------------------------------------------------
Verdict dephasing_trends() {
  const auto c = preset_config("fig3-fidelity-vs-gamma");
  const auto o = run(c);
  Verdict v;
  Notes notes;
  bool unexpected = false;
  bool known = false;
  for (double g : c.noise.dephasing) {
    const auto fo = gamma_key("fo", 1, g);
    const auto as = gamma_key("as", 1, g);
    const double tf = num(o, fo + ".best_duration"), ta = num(o, as + ".best_duration");
    const double ff = num(o, fo + ".best_mean"), fa = num(o, as + ".best_mean");
    notes.add("G=" + fmt(g, 2) + " FO " + fmt(ff) + "@T" + fmt(tf) + " AS " + fmt(fa) + "@T" + fmt(ta));
    if (tf < 2 || tf > 5 || ta < 5 || ta > 25) unexpected = true;
    if (ff < fa) {
      // Without dephasing AS is marginally ahead; see the decisions ledger.
      if (g == 0.0) known = true;
      else unexpected = true;
    }
    if (g == 0.4) {
      const double se = std::hypot(num(o, fo + ".best_stderr"), num(o, as + ".best_stderr"));
      notes.add("gap at 0.4 = " + fmt(ff - fa) + " vs 2se " + fmt(2 * se, 3));
      if (tf != 2.0 || ff - fa <= 2 * se) unexpected = true;
    }
  }
  if (known) notes.add("FO < AS at G=0 (known)");
  v.pass = !unexpected && !known;
  v.known = !unexpected && known;
  v.detail = notes.str();
  return v;
}

// 5 ------------------------------------------------------------------------
Verdict no_dephasing_regime() {
  const auto o = run(preset_config("fig4-dephasing0"));
  const double fo = num(o, gamma_key("fo", 1, 0.0) + ".best_mean");
  const double as = num(o, gamma_key("as", 1, 0.0) + ".best_mean");
  return {fo >= 0.97 && as >= 0.97, false, "FO " + fmt(fo) + ", AS " + fmt(as) + " (limit 0.97)"};
}

// Mean and standard error per qubit count for the first FO plan.
std::map<int, std::pair<double, double>> by_qubits(const ExperimentConfig& c, const ExperimentOutput& o) {
  std::map<int, std::pair<double, double>> out;
  const double g = c.noise.dephasing.front();
  for (int q : c.protocols.front().qubits) {
    const auto k = gamma_key("fo", q, g);
    out[q] = {num(o, k + ".best_mean"), num(o, k + ".best_stderr")};
  }
  return out;
}

// 6 ------------------------------------------------------------------------
Verdict leakage_suppression() {
  const auto c = preset_config("fig6-leakage-vs-nqubits");
  const auto m = by_qubits(c, run(c));
  Notes notes;
  for (const auto& [q, v] : m) notes.add("N" + std::to_string(q) + " " + fmt(v.first) + "+-" + fmt(v.second, 2));
  bool ok = m.at(4).first - m.at(1).first > 3 * std::hypot(m.at(4).second, m.at(1).second);
  for (int q = 1; q < 4; ++q) {
    ok = ok && m.at(q + 1).first >= m.at(q).first - std::hypot(m.at(q + 1).second, m.at(q).second);
  }
  return {ok, false, notes.str()};
}

// 7 ------------------------------------------------------------------------
Verdict trapped_ion() {
  const auto c = preset_config("ion-chain");
  const auto m = by_qubits(c, run(c));
  Notes notes;
  int best = 0;
  double top = -1.0;
  for (const auto& [q, v] : m) {
    notes.add("N" + std::to_string(q) + " " + fmt(v.first));
    if (v.first > top) top = v.first, best = q;
  }
  notes.add("max at N" + std::to_string(best));
  return {best == 2 && std::abs(top - 0.984) <= 0.02, false, notes.str()};
}

// 8 ------------------------------------------------------------------------
Verdict optimal_filters() {
  Notes notes;
  bool ok = true;
  // Duration scan for one and four qubits, best over the restarts.
  auto scan = preset_config("fig8-ocf-lorentzian");
  scan.ocf.qubits = {1, 4};
  const auto s = run(scan);
  for (int q : scan.ocf.qubits) {
    double best_t = 0.0, best = -1.0, at5 = 0.0, runner_up = -1.0;
    for (double t : scan.ocf.durations) {
      const double f = num(s, "ocf.n" + std::to_string(q) + ".T" + format_number(t, 12) + ".best_fidelity");
      if (t == 5.0) at5 = f;
      if (f > best) best = f, best_t = t;
    }
    for (double t : scan.ocf.durations) {
      if (t == 5.0) continue;
      runner_up = std::max(runner_up, num(s, "ocf.n" + std::to_string(q) + ".T" + format_number(t, 12) + ".best_fidelity"));
    }
    notes.add("N" + std::to_string(q) + " peak T" + fmt(best_t) + " (" + fmt(at5, 6) + " vs next " + fmt(runner_up, 6) + ")");
    ok = ok && best_t == 5.0;
  }
  // Mean over restarts against qubit count at T=5.
  auto counts = preset_config("fig8-ocf-lorentzian");
  counts.ocf.durations = {5.0};
  const auto n = run(counts);
  double prev = 0.0, prev_se = 0.0;
  std::string trend;
  for (std::size_t i = 0; i < counts.ocf.qubits.size(); ++i) {
    const auto k = "ocf.n" + std::to_string(counts.ocf.qubits[i]) + ".T5";
    const double mean = num(n, k + ".mean_fidelity"), se = num(n, k + ".stderr");
    trend += (i ? " " : "") + fmt(mean);
    if (i > 0) ok = ok && mean >= prev - std::hypot(se, prev_se);
    prev = mean;
    prev_se = se;
  }
  notes.add("restart means by N " + trend);
  // Continuous control.
  auto cont = preset_config("fig9-pulse-shape");
  cont.ocf.qubits = {0};
  const double fc = num(run(cont), "ocf.continuous.T5.best_fidelity");
  notes.add("continuous " + fmt(fc) + " (limit 0.99)");
  ok = ok && fc >= 0.99;
  return {ok, false, notes.str()};
}

// 9 ------------------------------------------------------------------------
Verdict tracking() {
  const auto slow = run(preset_config("fig12-tracking-slow"));
  const auto fast = run(preset_config("fig13-tracking-fast"));
  bool ok = true;
  for (const auto* o : {&slow, &fast}) {
    ok = ok && o->value("tracking.fo.samples") == "10" && o->value("tracking.ocf.n1.samples") == "50" &&
         o->value("tracking.ocf.n6.samples") == "50";
  }
  const double sf = num(slow, "tracking.fo.rms"), so = num(slow, "tracking.ocf.n6.rms");
  const double ff = num(fast, "tracking.fo.rms"), fo = num(fast, "tracking.ocf.n6.rms");
  ok = ok && sf <= 0.15 && so <= 0.10 && fo <= 0.5 * ff;
  return {ok, false,
          "samples 10/50; slow rms FO " + fmt(sf, 3) + " (<=0.15) OCF-6 " + fmt(so, 3) + " (<=0.10); fast FO " +
              fmt(ff, 3) + " OCF-6 " + fmt(fo, 3) + " (<= half)"};
}

// 10 -----------------------------------------------------------------------
Verdict fisher() {
  const auto o = run(preset_config("fisher-bound"));
  const double z = num(o, "fisher.max_bound_violation_z");
  const double residual = num(o, "fisher.max_union_residual");
  const bool ok = o.value("fisher.rank") == o.value("fisher.filter_rank") && residual <= 1e-12 && z <= 3.0;
  return {ok, false,
          "rank " + o.value("fisher.rank") + " vs filter rank " + o.value("fisher.filter_rank") +
              ", union residual " + fmt(residual, 2) + ", max z " + fmt(z, 3) + " (<=3)"};
}

// 11 -----------------------------------------------------------------------
// Reduced budgets keep every loop of each scenario while bounding the time.
ExperimentConfig reduced(ExperimentConfig c) {
  c.repetitions = std::min(c.repetitions, 4);
  c.ocf.restarts = std::min(c.ocf.restarts, 2);
  c.ocf.base.superiterations = 2;
  c.ocf.base.inner_evaluations = 20;
  c.tracking.ocf.superiterations = 2;
  c.tracking.ocf.inner_evaluations = 20;
  c.fisher.repeats = 30;
  return c;
}

Verdict determinism() {
  std::size_t files = 0;
  std::vector<std::string> bad;
  for (const auto& p : list_presets()) {
    auto c = reduced(preset_config(p.name));
    c.workers = 1;
    const auto serial = run_experiment(c);
    c.workers = 4;
    const auto parallel = run_experiment(c);
    const auto again = run_experiment(c);
    bool same = serial.files.size() == parallel.files.size() && serial.files.size() == again.files.size() &&
                serial.summary_text() == parallel.summary_text();
    for (std::size_t i = 0; same && i < serial.files.size(); ++i) {
      same = serial.files[i].content == parallel.files[i].content && serial.files[i].content == again.files[i].content;
    }
    files += serial.files.size();
    if (!same) bad.push_back(p.name);
  }
  std::string detail = std::to_string(list_presets().size()) + " presets, " + std::to_string(files) +
                       " files, serial vs 4 workers twice";
  for (const auto& b : bad) detail += "; differs: " + b;
  return {bad.empty(), false, detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::set<int> only;
  g_workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) {
      g_workers = std::max(1, std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--strict] [--only N]... [--workers N]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<Criterion> criteria{
      {1, "in-span exactness", in_span_exactness},
      {2, "time-domain oracle equivalence", oracle_equivalence},
      {3, "Parseval identity over preset filters", parseval},
      {4, "fidelity and optimal time vs dephasing", dephasing_trends},
      {5, "both protocols without dephasing", no_dephasing_regime},
      {6, "leakage suppression with qubit count", leakage_suppression},
      {7, "trapped-ion chain optimum", trapped_ion},
      {8, "optimized control filters", optimal_filters},
      {9, "tracking an oscillating signal", tracking},
      {10, "information operator and Cramer-Rao bound", fisher},
      {11, "serial vs parallel determinism", determinism},
  };
  int unexpected = 0, known = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = v.pass ? "PASS" : (v.known ? "FAIL (known, see ledger)" : "FAIL");
    std::printf("criterion %2d %-44s %s [%.0fs] %s\n", c.id, c.name, tag, secs, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) (v.known && !strict) ? ++known : ++unexpected;
  }
  std::printf("acceptance: %d unexpected failure(s), %d known failure(s)\n", unexpected, known);
  return unexpected == 0 ? 0 : 1;
}
