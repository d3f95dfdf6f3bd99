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

#include "noisespec/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>

#include <yaml-cpp/yaml.h>

#include "noisespec/csv.hpp"
#include "noisespec/error.hpp"
#include "noisespec/parallel.hpp"
#include "noisespec/rng.hpp"

#ifndef NOISESPEC_VERSION
#define NOISESPEC_VERSION "0.0.0"
#endif

namespace noisespec {

const char* library_version() { return NOISESPEC_VERSION; }

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kReconstruction: return "reconstruction";
    case ScenarioKind::kOcf: return "ocf";
    case ScenarioKind::kTracking: return "tracking";
    case ScenarioKind::kFisher: return "fisher";
  }
  return "?";
}

namespace {

const char* calibration_name(Calibration c) {
  switch (c) {
    case Calibration::kPerConfiguration: return "per-configuration";
    case Calibration::kReference: return "reference";
    case Calibration::kNone: return "none";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// YAML reading with positioned diagnostics.

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void error(const YAML::Node& at, const std::string& message) const {
    std::string where = source_;
    if (at.IsDefined()) {
      const YAML::Mark m = at.Mark();
      if (m.line >= 0) where += ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
    }
    fail(ErrorCode::kConfig, where + ": " + message);
  }

  void require_map(const YAML::Node& node, const std::string& section) const {
    if (!node.IsMap()) error(node, "'" + section + "' must be a mapping");
  }

  void allow(const YAML::Node& map, const std::string& section,
             std::initializer_list<std::string_view> keys) const {
    require_map(map, section);
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        error(kv.first, "unknown key '" + key + "' in '" + section + "'");
      }
    }
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) error(node, "'" + what + "' must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      error(node, "'" + what + "' has an invalid value '" + node.Scalar() + "'");
    }
  }

  template <class T>
  void read(const YAML::Node& map, const char* key, T& target, const std::string& section) const {
    const YAML::Node n = map[key];
    if (n.IsDefined() && !n.IsNull()) target = scalar<T>(n, section + "." + key);
  }

  template <class T>
  void read_list(const YAML::Node& map, const char* key, std::vector<T>& target,
                 const std::string& section) const {
    const YAML::Node n = map[key];
    if (!n.IsDefined() || n.IsNull()) return;
    const std::string what = section + "." + key;
    target.clear();
    if (n.IsScalar()) {
      target.push_back(scalar<T>(n, what));
      return;
    }
    if (!n.IsSequence()) error(n, "'" + what + "' must be a value or a list");
    for (const auto& item : n) target.push_back(scalar<T>(item, what));
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

SpectrumSpec read_spectrum(const Reader& r, const YAML::Node& n, const std::string& section) {
  SpectrumSpec s;
  r.allow(n, section, {"preset", "scale", "components", "file"});
  r.read(n, "preset", s.preset, section);
  r.read(n, "scale", s.scale, section);
  r.read(n, "file", s.file, section);
  if (!s.file.empty()) {
    if (n["preset"].IsDefined() && s.preset != "file") {
      r.error(n["file"], "'file' is only allowed with preset 'file'");
    }
    s.preset = "file";
    // Relative tables resolve against the config's directory.
    std::filesystem::path p(s.file);
    if (p.is_relative() && r.source().front() != '<') {
      p = std::filesystem::path(r.source()).parent_path() / p;
    }
    s.file = p.lexically_normal().string();
  }
  const YAML::Node comps = n["components"];
  if (comps.IsDefined() && !comps.IsNull()) {
    if (!comps.IsSequence()) r.error(comps, "'" + section + ".components' must be a list");
    for (const auto& c : comps) {
      r.allow(c, section + ".components[]", {"amplitude", "center", "width_scale"});
      Lorentzian l;
      r.read(c, "amplitude", l.amplitude, section + ".components[]");
      r.read(c, "center", l.center, section + ".components[]");
      r.read(c, "width_scale", l.width_scale, section + ".components[]");
      s.components.push_back(l);
    }
  }
  if (s.preset != "single-peak" && s.preset != "double-peak" && s.preset != "leakage" &&
      s.preset != "custom" && s.preset != "file") {
    r.error(n["preset"], "unknown spectrum preset '" + s.preset + "'");
  }
  if (s.preset == "custom" && s.components.empty()) {
    r.error(n, "a custom spectrum needs at least one component");
  }
  if (s.preset == "file" && s.file.empty()) r.error(n, "preset 'file' needs a 'file' entry");
  if (s.preset != "custom" && !s.components.empty()) {
    r.error(comps, "components are only allowed with preset 'custom'");
  }
  return s;
}

RetentionRule read_retention(const Reader& r, const YAML::Node& n, const std::string& section) {
  r.allow(n, section, {"mode", "value", "count"});
  std::string mode = "threshold";
  r.read(n, "mode", mode, section);
  if (mode == "threshold") {
    double v = 3e-2;
    r.read(n, "value", v, section);
    return RetentionRule::relative(v);
  }
  if (mode == "count") {
    int c = 0;
    r.read(n, "count", c, section);
    return RetentionRule::largest(c);
  }
  if (mode == "cross-validated") return RetentionRule::cross_validated();
  r.error(n["mode"], "retention mode must be threshold, count or cross-validated");
}

void read_grid(const Reader& r, const YAML::Node& n, ProtocolSetup& s, const std::string& section) {
  r.allow(n, section, {"step", "points", "max", "integration_max"});
  r.read(n, "step", s.grid_step, section);
  r.read(n, "points", s.grid_points, section);
  r.read(n, "max", s.grid_max, section);
  r.read(n, "integration_max", s.integration_max, section);
}

ProtocolPlan read_protocol(const Reader& r, const YAML::Node& n, const ProtocolSetup& grid,
                           const std::string& section) {
  r.allow(n, section,
          {"protocol", "filters", "omega_max", "cutoff", "durations", "qubits",
           "durations_by_qubits", "detector_error_by_qubits", "retention", "as_method",
           "clamp_negative", "collective_dephasing", "grid"});
  ProtocolPlan p;
  p.setup = grid;
  if (n["grid"].IsDefined()) read_grid(r, n["grid"], p.setup, section + ".grid");
  std::string name = "fo";
  r.read(n, "protocol", name, section);
  if (name == "fo") {
    p.setup.protocol = Protocol::kFo;
  } else if (name == "as") {
    p.setup.protocol = Protocol::kAs;
    p.setup.omega_max = 10.0;
  } else {
    r.error(n["protocol"], "protocol must be 'fo' or 'as'");
  }
  r.read(n, "filters", p.setup.filter_count, section);
  r.read(n, "omega_max", p.setup.omega_max, section);
  r.read(n, "cutoff", p.setup.cutoff, section);
  r.read_list(n, "durations", p.durations, section);
  r.read_list(n, "qubits", p.qubits, section);
  r.read_list(n, "durations_by_qubits", p.durations_by_qubits, section);
  r.read_list(n, "detector_error_by_qubits", p.detector_error_by_qubits, section);
  if (n["retention"].IsDefined()) {
    p.setup.retention = read_retention(r, n["retention"], section + ".retention");
  }
  std::string method = "binned";
  r.read(n, "as_method", method, section);
  if (method == "binned") {
    p.setup.as_method = AsMethod::kBinned;
  } else if (method == "delta") {
    p.setup.as_method = AsMethod::kDelta;
  } else {
    r.error(n["as_method"], "as_method must be 'binned' or 'delta'");
  }
  r.read(n, "clamp_negative", p.setup.clamp_negative, section);
  r.read(n, "collective_dephasing", p.setup.collective_dephasing, section);
  const auto by_n = [&](const std::vector<double>& v, const char* key) {
    if (!v.empty() && v.size() != p.qubits.size()) {
      r.error(n[key], std::string("'") + key + "' needs one entry per qubit count");
    }
  };
  by_n(p.durations_by_qubits, "durations_by_qubits");
  by_n(p.detector_error_by_qubits, "detector_error_by_qubits");
  return p;
}

void read_ocf_problem(const Reader& r, const YAML::Node& n, OcfProblem& p,
                      const std::string& section, bool with_scan,
                      std::vector<int>* qubits, std::vector<double>* durations, int* restarts) {
  if (with_scan) {
    r.allow(n, section,
            {"qubits", "durations", "restarts", "cutoff", "out_of_band", "penalty_weight",
             "superiterations", "inner_evaluations", "basis_size", "grid_step", "grid_max",
             "seed"});
    r.read_list(n, "qubits", *qubits, section);
    r.read_list(n, "durations", *durations, section);
    r.read(n, "restarts", *restarts, section);
  } else {
    r.allow(n, section,
            {"qubits", "cutoff", "out_of_band", "penalty_weight", "superiterations",
             "inner_evaluations", "basis_size", "grid_step", "grid_max", "seed"});
    r.read_list(n, "qubits", *qubits, section);
  }
  r.read(n, "cutoff", p.cutoff, section);
  std::string mode = "penalty";
  r.read(n, "out_of_band", mode, section);
  if (mode == "penalty") {
    p.out_of_band = OutOfBand::kPenalty;
  } else if (mode == "truncate") {
    p.out_of_band = OutOfBand::kTruncate;
  } else {
    r.error(n["out_of_band"], "out_of_band must be 'penalty' or 'truncate'");
  }
  r.read(n, "penalty_weight", p.penalty_weight, section);
  r.read(n, "superiterations", p.superiterations, section);
  r.read(n, "inner_evaluations", p.inner_evaluations, section);
  r.read(n, "basis_size", p.basis_size, section);
  r.read(n, "grid_step", p.grid_step, section);
  r.read(n, "grid_max", p.grid_max, section);
  r.read(n, "seed", p.seed, section);
}

ExperimentConfig parse_document(const YAML::Node& root, const Reader& r) {
  ExperimentConfig c;
  r.allow(root, "config",
          {"scenario", "description", "kind", "seed", "repetitions", "workers", "units",
           "spectrum", "calibration", "noise", "grid", "protocols", "ocf", "tracking",
           "fisher"});
  if (!root["scenario"].IsDefined()) r.error(root, "missing required key 'scenario'");
  r.read(root, "scenario", c.scenario, "config");
  r.read(root, "description", c.description, "config");
  std::string kind = "reconstruction";
  r.read(root, "kind", kind, "config");
  if (kind == "reconstruction") {
    c.kind = ScenarioKind::kReconstruction;
  } else if (kind == "ocf") {
    c.kind = ScenarioKind::kOcf;
  } else if (kind == "tracking") {
    c.kind = ScenarioKind::kTracking;
  } else if (kind == "fisher") {
    c.kind = ScenarioKind::kFisher;
  } else {
    r.error(root["kind"], "kind must be reconstruction, ocf, tracking or fisher");
  }
  r.read(root, "seed", c.seed, "config");
  r.read(root, "repetitions", c.repetitions, "config");
  r.read(root, "workers", c.workers, "config");

  if (const YAML::Node u = root["units"]; u.IsDefined()) {
    r.allow(u, "units", {"time", "frequency"});
    r.read(u, "time", c.time_unit, "units");
    r.read(u, "frequency", c.frequency_unit, "units");
  }
  if (const YAML::Node s = root["spectrum"]; s.IsDefined()) {
    c.spectrum = read_spectrum(r, s, "spectrum");
  }
  std::string calibration = "per-configuration";
  r.read(root, "calibration", calibration, "config");
  if (calibration == "per-configuration") {
    c.calibration = Calibration::kPerConfiguration;
  } else if (calibration == "reference") {
    c.calibration = Calibration::kReference;
  } else if (calibration == "none") {
    c.calibration = Calibration::kNone;
  } else {
    r.error(root["calibration"], "calibration must be per-configuration, reference or none");
  }
  if (const YAML::Node n = root["noise"]; n.IsDefined()) {
    r.allow(n, "noise", {"dephasing", "detector_error", "shots"});
    r.read_list(n, "dephasing", c.noise.dephasing, "noise");
    r.read(n, "detector_error", c.noise.detector_error, "noise");
    r.read(n, "shots", c.noise.shots, "noise");
  }
  ProtocolSetup grid;
  if (const YAML::Node g = root["grid"]; g.IsDefined()) read_grid(r, g, grid, "grid");

  if (const YAML::Node ps = root["protocols"]; ps.IsDefined()) {
    if (!ps.IsSequence()) r.error(ps, "'protocols' must be a list");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      c.protocols.push_back(read_protocol(r, ps[i], grid, "protocols[" + std::to_string(i) + "]"));
    }
  }
  if (const YAML::Node o = root["ocf"]; o.IsDefined()) {
    read_ocf_problem(r, o, c.ocf.base, "ocf", true, &c.ocf.qubits, &c.ocf.durations,
                     &c.ocf.restarts);
  }
  if (const YAML::Node t = root["tracking"]; t.IsDefined()) {
    auto& tp = c.tracking;
    r.allow(t, "tracking",
            {"first", "second", "amplitude", "oscillation", "oscillation_over_pi", "horizon",
             "duration", "fo", "ocf"});
    if (t["first"].IsDefined()) tp.first = read_spectrum(r, t["first"], "tracking.first");
    if (t["second"].IsDefined()) tp.second = read_spectrum(r, t["second"], "tracking.second");
    r.read(t, "amplitude", tp.amplitude, "tracking");
    r.read(t, "oscillation", tp.oscillation, "tracking");
    if (t["oscillation_over_pi"].IsDefined()) {
      if (t["oscillation"].IsDefined()) {
        r.error(t["oscillation_over_pi"], "give either oscillation or oscillation_over_pi");
      }
      double over_pi = 0.0;
      r.read(t, "oscillation_over_pi", over_pi, "tracking");
      tp.oscillation = over_pi * std::numbers::pi;
    }
    r.read(t, "horizon", tp.horizon, "tracking");
    r.read(t, "duration", tp.duration, "tracking");
    if (const YAML::Node f = t["fo"]; f.IsDefined()) {
      r.allow(f, "tracking.fo", {"filters", "omega_max", "cutoff", "grid_step", "retention"});
      r.read(f, "filters", tp.fo.filters, "tracking.fo");
      r.read(f, "omega_max", tp.fo.omega_max, "tracking.fo");
      r.read(f, "cutoff", tp.fo.cutoff, "tracking.fo");
      r.read(f, "grid_step", tp.fo.grid_step, "tracking.fo");
      if (f["retention"].IsDefined()) {
        tp.fo.retention = read_retention(r, f["retention"], "tracking.fo.retention");
      }
    }
    if (const YAML::Node o = t["ocf"]; o.IsDefined()) {
      read_ocf_problem(r, o, tp.ocf, "tracking.ocf", false, &tp.ocf_qubits, nullptr, nullptr);
    }
  }
  if (const YAML::Node f = root["fisher"]; f.IsDefined()) {
    auto& fp = c.fisher;
    fp.setup = grid;
    r.allow(f, "fisher",
            {"filters", "omega_max", "cutoff", "duration", "shots", "repeats", "directions",
             "weighting"});
    r.read(f, "filters", fp.setup.filter_count, "fisher");
    r.read(f, "omega_max", fp.setup.omega_max, "fisher");
    r.read(f, "cutoff", fp.setup.cutoff, "fisher");
    r.read(f, "duration", fp.setup.duration, "fisher");
    r.read(f, "shots", fp.shots, "fisher");
    r.read(f, "repeats", fp.repeats, "fisher");
    r.read(f, "directions", fp.directions, "fisher");
    std::string w = "exact-bernoulli";
    r.read(f, "weighting", w, "fisher");
    if (w == "exact-bernoulli") {
      fp.weighting = FisherWeighting::kExactBernoulli;
    } else if (w == "published") {
      fp.weighting = FisherWeighting::kPublished;
    } else {
      r.error(f["weighting"], "weighting must be 'exact-bernoulli' or 'published'");
    }
  } else {
    c.fisher.setup = grid;
  }
  try {
    c.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kConfig, r.source() + ": " + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Shared helpers for the runners.

std::string num(double v) { return format_number(v, 12); }

void common_meta(CsvWriter& csv, const ExperimentConfig& c) {
  csv.meta("scenario", c.scenario)
      .meta("kind", to_string(c.kind))
      .meta("seed", std::to_string(c.seed))
      .meta("time_unit", c.time_unit)
      .meta("frequency_unit", c.frequency_unit)
      .meta("version", library_version());
}

void common_summary(ExperimentOutput& out, const ExperimentConfig& c) {
  out.summary.emplace_back("scenario", c.scenario);
  out.summary.emplace_back("kind", to_string(c.kind));
  out.summary.emplace_back("seed", std::to_string(c.seed));
  out.summary.emplace_back("repetitions", std::to_string(c.repetitions));
  out.summary.emplace_back("version", library_version());
  out.summary.emplace_back("time_unit", c.time_unit);
  out.summary.emplace_back("frequency_unit", c.frequency_unit);
}

std::string qubit_tag(int q) { return q == 0 ? "continuous" : "n" + std::to_string(q); }

// ---------------------------------------------------------------------------
// Reconstruction scenarios: duration scans over protocols, N and Gamma.

struct Case {
  const ProtocolPlan* plan;
  int qubits;
  double rate;
  double detector_error;
  std::vector<double> durations;
};

ExperimentOutput run_reconstruction(const ExperimentConfig& c) {
  ExperimentOutput out;
  common_summary(out, c);
  out.summary.emplace_back("calibration", calibration_name(c.calibration));
  const SpectralDensity spectrum = c.spectrum.build();

  std::vector<Case> cases;
  for (const auto& plan : c.protocols) {
    for (double rate : c.noise.dephasing) {
      for (std::size_t i = 0; i < plan.qubits.size(); ++i) {
        Case k{&plan, plan.qubits[i], rate, c.noise.detector_error, plan.durations};
        if (!plan.durations_by_qubits.empty()) k.durations = {plan.durations_by_qubits[i]};
        if (!plan.detector_error_by_qubits.empty()) k.detector_error = plan.detector_error_by_qubits[i];
        cases.push_back(std::move(k));
      }
    }
  }

  // Reference calibration: S0 fixed once by the first configuration.
  SpectralDensity fixed = spectrum;
  const bool per_config = c.calibration == Calibration::kPerConfiguration;
  if (c.calibration == Calibration::kReference) {
    ProtocolSetup s = cases.front().plan->setup;
    s.qubits = cases.front().qubits;
    s.duration = cases.front().durations.front();
    fixed = spectrum.with_scale(PreparedProtocol(s, spectrum).amplitude());
    out.summary.emplace_back("reference_amplitude", num(fixed.scale()));
  }

  std::ostringstream fid;
  CsvWriter fcsv(fid);
  common_meta(fcsv, c);
  fcsv.meta("repetitions", std::to_string(c.repetitions))
      .meta("calibration", calibration_name(c.calibration));
  fcsv.header({"protocol", "qubits", "gamma", "detector_error", "duration", "amplitude", "mean",
               "stderr", "failures", "best"});
  std::ostringstream est;
  CsvWriter ecsv(est);
  common_meta(ecsv, c);
  ecsv.meta("repetition", "0");
  ecsv.header({"protocol", "qubits", "gamma", "duration", "retained", "fidelity", "omega", "truth",
               "estimate"});
  std::ostringstream curve;
  CsvWriter ccsv(curve);
  common_meta(ccsv, c);
  ccsv.meta("repetition", "0");
  ccsv.header({"qubits", "gamma", "duration", "omega", "truth", "estimate"});
  bool any_fo = false;

  for (const auto& k : cases) {
    ProtocolSetup setup = k.plan->setup;
    setup.qubits = k.qubits;
    NoiseModel noise;
    noise.dephasing_rate = k.rate;
    noise.max_detector_error = k.detector_error;
    if (c.noise.shots > 0) noise.shots = c.noise.shots;
    const ScanResult scan = scan_optimal_time(setup, per_config ? spectrum : fixed, noise,
                                              k.durations, c.repetitions, c.seed, c.workers,
                                              per_config);
    const std::string proto = to_string(setup.protocol);
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
      const auto& p = scan.points[i];
      fcsv.raw_row({proto, std::to_string(k.qubits), num(k.rate), num(k.detector_error),
                    num(p.duration), num(p.amplitude), num(p.stats.mean),
                    num(p.stats.standard_error), std::to_string(p.stats.failures),
                    i == scan.best ? "1" : "0"});
    }
    const auto& best = scan.points[scan.best];
    std::string key = proto + "." + qubit_tag(k.qubits) + ".gamma" + num(k.rate);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    out.summary.emplace_back(key + ".best_duration", num(best.duration));
    out.summary.emplace_back(key + ".best_mean", num(best.stats.mean));
    out.summary.emplace_back(key + ".best_stderr", num(best.stats.standard_error));
    out.summary.emplace_back(key + ".best_failures", std::to_string(best.stats.failures));

    // First repetition at the best duration, for plotting.
    setup.duration = best.duration;
    const PreparedProtocol prepared(setup, per_config ? spectrum : fixed, per_config);
    NoiseModel first = noise;
    first.seed = repetition_seed(c.seed, 0);
    const Trial t = prepared.run(first);
    if (t.failed) {
      out.summary.emplace_back(key + ".example", std::string("failed: ") + t.failure);
      continue;
    }
    const auto& rec = t.reconstruction;
    for (std::size_t i = 0; i < rec.point_frequencies.size(); ++i) {
      const double w = rec.point_frequencies[i];
      ecsv.raw_row({proto, std::to_string(k.qubits), num(k.rate), num(best.duration),
                    std::to_string(rec.retained), num(t.fidelity), num(w),
                    num(prepared.truth()(w)), num(rec.point_values[i])});
    }
    if (setup.protocol == Protocol::kFo) {
      any_fo = true;
      // About 200 points across the analysed band.
      const std::size_t stride = std::max<std::size_t>(1, rec.grid_values.size() / 200);
      for (std::size_t i = 0; i < rec.grid_values.size(); i += stride) {
        const double w = rec.grid_step * static_cast<double>(i);
        ccsv.row({static_cast<double>(k.qubits), k.rate, best.duration, w, prepared.truth()(w),
                  rec.grid_values[i]});
      }
    }
  }
  out.files.push_back({"fidelity.csv", fid.str()});
  out.files.push_back({"estimates.csv", est.str()});
  if (any_fo) out.files.push_back({"fo_curve.csv", curve.str()});
  return out;
}

// ---------------------------------------------------------------------------
// Filter design scenarios.

struct OcfJob {
  int qubits;
  double duration;
  int restart;
};

std::vector<double> mean_and_error(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  const double se = v.size() > 1 ? std::sqrt(s / (n - 1.0) / n) : 0.0;
  return {m, se};
}

ExperimentOutput run_ocf(const ExperimentConfig& c) {
  ExperimentOutput out;
  common_summary(out, c);
  const SpectralDensity target = c.spectrum.build();
  std::vector<OcfJob> jobs;
  for (int q : c.ocf.qubits) {
    for (double t : c.ocf.durations) {
      for (int r = 0; r < c.ocf.restarts; ++r) jobs.push_back({q, t, r});
    }
  }
  std::vector<std::unique_ptr<OcfSolution>> solutions(jobs.size());
  parallel_for(jobs.size(), c.workers, [&](std::size_t i) {
    OcfProblem p = c.ocf.base;
    p.target = target;
    p.qubits = jobs[i].qubits;
    p.duration = jobs[i].duration;
    p.seed = c.ocf.base.seed + static_cast<std::uint64_t>(jobs[i].restart);
    solutions[i] = std::make_unique<OcfSolution>(optimize_filter(p));
  });

  std::ostringstream runs;
  CsvWriter rcsv(runs);
  common_meta(rcsv, c);
  rcsv.meta("superiterations", std::to_string(c.ocf.base.superiterations))
      .meta("inner_evaluations", std::to_string(c.ocf.base.inner_evaluations))
      .meta("basis_size", std::to_string(c.ocf.base.basis_size))
      .meta("penalty_weight", c.ocf.base.penalty_weight)
      .meta("out_of_band", c.ocf.base.out_of_band == OutOfBand::kPenalty ? "penalty" : "truncate");
  rcsv.header({"qubits", "duration", "restart", "seed", "fidelity", "xi", "objective",
               "out_of_band", "evaluations"});
  std::ostringstream trace;
  CsvWriter tcsv(trace);
  common_meta(tcsv, c);
  tcsv.header({"qubits", "duration", "restart", "iteration", "objective"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& s = *solutions[i];
    rcsv.raw_row({std::to_string(jobs[i].qubits), num(jobs[i].duration),
                  std::to_string(jobs[i].restart),
                  std::to_string(c.ocf.base.seed + static_cast<std::uint64_t>(jobs[i].restart)),
                  num(s.value.fidelity), num(s.value.xi), num(s.value.objective),
                  num(s.value.out_of_band_fraction), std::to_string(s.evaluations)});
    for (std::size_t it = 0; it < s.trace.size(); ++it) {
      tcsv.raw_row({std::to_string(jobs[i].qubits), num(jobs[i].duration),
                    std::to_string(jobs[i].restart), std::to_string(it), num(s.trace[it])});
    }
  }

  std::ostringstream best;
  CsvWriter bcsv(best);
  common_meta(bcsv, c);
  bcsv.header({"qubits", "duration", "best_fidelity", "mean_fidelity", "stderr", "best_restart"});
  std::ostringstream sw;
  CsvWriter scsv(sw);
  common_meta(scsv, c);
  scsv.header({"qubits", "duration", "qubit", "switch_time"});
  std::ostringstream ph;
  CsvWriter pcsv(ph);
  common_meta(pcsv, c);
  pcsv.header({"duration", "offset", "ramp", "frequency", "cos_coeff", "sin_coeff"});
  bool any_discrete = false;
  bool any_continuous = false;
  const auto per_group = static_cast<std::size_t>(c.ocf.restarts);
  for (std::size_t g = 0; g < jobs.size(); g += per_group) {
    std::vector<double> f;
    std::size_t arg = g;
    for (std::size_t i = g; i < g + per_group; ++i) {
      f.push_back(solutions[i]->value.fidelity);
      if (solutions[i]->value.fidelity > solutions[arg]->value.fidelity) arg = i;
    }
    const auto me = mean_and_error(f);
    const int q = jobs[g].qubits;
    const double t = jobs[g].duration;
    bcsv.raw_row({std::to_string(q), num(t), num(solutions[arg]->value.fidelity), num(me[0]),
                  num(me[1]), std::to_string(jobs[arg].restart)});
    const std::string key = "ocf." + qubit_tag(q) + ".T" + num(t);
    out.summary.emplace_back(key + ".best_fidelity", num(solutions[arg]->value.fidelity));
    out.summary.emplace_back(key + ".mean_fidelity", num(me[0]));
    out.summary.emplace_back(key + ".stderr", num(me[1]));
    const Modulation& m = solutions[arg]->modulation;
    if (const auto* set = std::get_if<ModulationSet>(&m)) {
      any_discrete = true;
      for (std::size_t j = 0; j < set->qubit_count(); ++j) {
        for (double s : set->sequences()[j].switch_times()) {
          scsv.raw_row({std::to_string(q), num(t), std::to_string(j + 1), format_number(s, 17)});
        }
      }
    } else {
      any_continuous = true;
      const auto& cm = std::get<ContinuousModulation>(m);
      if (cm.terms().empty()) {
        pcsv.raw_row({num(t), format_number(cm.offset(), 17), format_number(cm.ramp(), 17), "0",
                      "0", "0"});
      }
      for (const auto& term : cm.terms()) {
        pcsv.raw_row({num(t), format_number(cm.offset(), 17), format_number(cm.ramp(), 17),
                      format_number(term.frequency, 17), format_number(term.cos_coeff, 17),
                      format_number(term.sin_coeff, 17)});
      }
    }
  }
  out.files.push_back({"ocf_runs.csv", runs.str()});
  out.files.push_back({"ocf_best.csv", best.str()});
  out.files.push_back({"ocf_trace.csv", trace.str()});
  if (any_discrete) out.files.push_back({"switches.csv", sw.str()});
  if (any_continuous) out.files.push_back({"phase.csv", ph.str()});
  return out;
}

// ---------------------------------------------------------------------------
// Tracking scenarios.

ExperimentOutput run_tracking(const ExperimentConfig& c) {
  ExperimentOutput out;
  common_summary(out, c);
  const auto& tp = c.tracking;
  CompositeSignal signal{tp.oscillation, tp.first.build().scaled(tp.amplitude),
                         tp.second.build().scaled(tp.amplitude)};
  TrackingOptions options;
  options.horizon = tp.horizon;
  options.duration = tp.duration;
  options.noise.max_detector_error = c.noise.detector_error;
  options.noise.dephasing_rate = c.noise.dephasing.front();
  if (c.noise.shots > 0) options.noise.shots = c.noise.shots;
  options.noise.seed = c.seed;
  options.workers = c.workers;

  // Filter pairs, one optimisation per (N, component).
  const std::size_t n_pairs = tp.ocf_qubits.size();
  std::vector<std::unique_ptr<OcfSolution>> designs(2 * n_pairs);
  parallel_for(designs.size(), c.workers, [&](std::size_t i) {
    OcfProblem p = tp.ocf;
    p.target = i % 2 == 0 ? signal.first : signal.second;
    p.qubits = tp.ocf_qubits[i / 2];
    p.duration = tp.duration;
    designs[i] = std::make_unique<OcfSolution>(optimize_filter(p));
  });

  std::ostringstream body;
  CsvWriter csv(body);
  common_meta(csv, c);
  csv.meta("oscillation", tp.oscillation).meta("horizon", tp.horizon).meta("amplitude", tp.amplitude);
  csv.header({"method", "qubits", "t", "s1_hat", "s2_hat", "s1_true", "s2_true", "failed"});
  const auto emit = [&](const TrackingRun& run, int qubits, const std::string& key) {
    for (const auto& s : run.samples) {
      csv.raw_row({to_string(run.method), std::to_string(qubits), num(s.time), num(s.first),
                   num(s.second), num(s.first_true), num(s.second_true), s.failed ? "1" : "0"});
    }
    out.summary.emplace_back(key + ".samples", std::to_string(run.samples.size()));
    out.summary.emplace_back(key + ".block_duration", num(run.block_duration));
    out.summary.emplace_back(key + ".rms", num(tracking_rms(run, signal)));
  };
  emit(track_fo(signal, tp.fo, options), 1, "tracking.fo");
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const OcfProblem grid_problem = [&] {
      OcfProblem p = tp.ocf;
      p.duration = tp.duration;
      return p;
    }();
    const FrequencyGrid grid = grid_problem.grid();
    std::vector<FilterFunction> pair{filter_function(designs[2 * i]->modulation, grid),
                                     filter_function(designs[2 * i + 1]->modulation, grid)};
    const std::string key = "tracking.ocf." + qubit_tag(tp.ocf_qubits[i]);
    out.summary.emplace_back(key + ".first_filter_fidelity", num(designs[2 * i]->value.fidelity));
    out.summary.emplace_back(key + ".second_filter_fidelity",
                             num(designs[2 * i + 1]->value.fidelity));
    emit(track_ocf(signal, pair, options), tp.ocf_qubits[i], key);
  }
  out.files.push_back({"tracking.csv", body.str()});
  return out;
}

// ---------------------------------------------------------------------------
// Information bounds.

ExperimentOutput run_fisher(const ExperimentConfig& c) {
  ExperimentOutput out;
  common_summary(out, c);
  const auto& fp = c.fisher;
  const SpectralDensity spectrum = c.spectrum.build();
  const PreparedProtocol prepared(fp.setup, spectrum, c.calibration != Calibration::kNone);
  const double upper = fp.setup.integration_limit();
  const double rate = prepared.effective_rate(c.noise.dephasing.front());
  const auto& filters = prepared.filters();
  std::vector<double> probs;
  for (double ck : prepared.coefficients()) {
    probs.push_back(survival_probability(ck, rate, fp.setup.duration));
  }
  const auto shots = static_cast<double>(fp.shots);
  const FisherOperator fio = build_fio(filters, probs, fp.weighting, shots);
  const std::size_t half = filters.size() / 2;
  const std::span<const FilterFunction> all(filters);
  const std::span<const double> ps(probs);
  const FisherOperator left = build_fio(all.first(half), ps.first(half), fp.weighting, shots);
  const FisherOperator right =
      build_fio(all.subspan(half), ps.subspan(half), fp.weighting, shots);
  const FisherOperator joined = merge(left, right);

  out.summary.emplace_back("fisher.rank", std::to_string(fio_rank(fio, upper)));
  out.summary.emplace_back("fisher.filter_rank", std::to_string(filter_rank(filters, upper)));
  out.summary.emplace_back("fisher.excluded", std::to_string(fio.excluded.size()));

  std::ostringstream body;
  CsvWriter csv(body);
  common_meta(csv, c);
  csv.meta("shots", std::to_string(fp.shots))
      .meta("repeats", std::to_string(fp.repeats))
      .meta("weighting", fp.weighting == FisherWeighting::kExactBernoulli ? "exact-bernoulli"
                                                                           : "published");
  csv.header({"direction", "center", "width_scale", "information", "union_residual", "bound",
              "spread", "spread_error", "mean", "z"});
  Rng rng = make_rng(c.seed, 0x444952ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_z = -std::numeric_limits<double>::infinity();
  double worst_union = 0.0;
  for (int d = 0; d < fp.directions; ++d) {
    const double center = fp.setup.cutoff * unit(rng);
    const double width = 0.5 + 1.5 * unit(rng);
    const auto dir = SpectralDensity::lorentzian_mixture({{1.0, center, width}});
    const double info = directional_fisher(fio, dir, upper);
    const double parts = directional_fisher(left, dir, upper) + directional_fisher(right, dir, upper);
    const double union_residual = std::abs(directional_fisher(joined, dir, upper) - parts) / info;
    std::vector<double> projections;
    for (const auto& f : filters) projections.push_back(signal_overlap(dir, f, upper));
    const DeviationStudy st =
        deviation_study(prepared.coefficients(), projections, fp.shots, rate, fp.setup.duration,
                        fp.repeats, split_seed(c.seed, static_cast<std::uint64_t>(d)),
                        fp.weighting, c.workers);
    // Standard errors by which the observed spread falls below the bound.
    const double z = st.spread_error > 0.0 ? (st.bound - st.spread) / st.spread_error : 0.0;
    worst_z = std::max(worst_z, z);
    worst_union = std::max(worst_union, union_residual);
    csv.row({static_cast<double>(d), center, width, info, union_residual, st.bound, st.spread,
             st.spread_error, st.mean, z});
  }
  out.summary.emplace_back("fisher.max_bound_violation_z", num(worst_z));
  out.summary.emplace_back("fisher.max_union_residual", num(worst_union));
  out.files.push_back({"fisher.csv", body.str()});
  return out;
}

// Two numeric columns; '#' lines and one optional header row are skipped.
SpectralDensity read_spectrum_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open spectrum table " + path);
  std::vector<double> freq;
  std::vector<double> vals;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      fail(ErrorCode::kConfig, path + ":" + std::to_string(line_no) + ": expected two columns");
    }
    try {
      const double w = std::stod(line.substr(0, comma));
      const double v = std::stod(line.substr(comma + 1));
      freq.push_back(w);
      vals.push_back(v);
    } catch (const std::logic_error&) {
      if (freq.empty()) continue;  // header row
      fail(ErrorCode::kConfig, path + ":" + std::to_string(line_no) + ": not a number");
    }
  }
  try {
    return SpectralDensity::sampled(std::move(freq), std::move(vals));
  } catch (const Error& e) {
    fail(ErrorCode::kConfig, path + ": " + e.what());
  }
}

}  // namespace

SpectralDensity SpectrumSpec::build() const {
  SpectralDensity base;
  if (preset == "single-peak") {
    base = single_peak_spectrum();
  } else if (preset == "double-peak") {
    base = double_peak_spectrum();
  } else if (preset == "leakage") {
    base = leakage_spectrum();
  } else if (preset == "custom") {
    base = SpectralDensity::lorentzian_mixture(components);
  } else if (preset == "file") {
    base = read_spectrum_table(file);
  } else {
    fail(ErrorCode::kConfig, "unknown spectrum preset '" + preset + "'");
  }
  return base.with_scale(scale);
}

void ExperimentConfig::validate() const {
  const auto bad = [](const std::string& m) { fail(ErrorCode::kConfig, m); };
  if (scenario.empty()) bad("scenario name is empty");
  if (repetitions < 1) bad("repetitions must be >= 1");
  if (workers < 0) bad("workers must be >= 0");
  if (noise.dephasing.empty()) bad("noise.dephasing needs at least one value");
  for (double g : noise.dephasing) {
    if (!(g >= 0.0)) bad("noise.dephasing values must be >= 0");
  }
  if (!(noise.detector_error >= 0.0 && noise.detector_error < 0.5)) {
    bad("noise.detector_error must lie in [0, 0.5)");
  }
  if (!(spectrum.scale > 0.0)) bad("spectrum.scale must be positive");
  const auto check = [&](const std::string& where, const auto& fn) {
    try {
      fn();
    } catch (const Error& e) {
      bad(where + ": " + e.what());
    }
  };
  switch (kind) {
    case ScenarioKind::kReconstruction:
      if (protocols.empty()) bad("a reconstruction scenario needs at least one protocol");
      for (std::size_t i = 0; i < protocols.size(); ++i) {
        const auto& p = protocols[i];
        const std::string where = "protocols[" + std::to_string(i) + "]";
        if (p.qubits.empty()) bad(where + ": qubits is empty");
        if (p.durations.empty() && p.durations_by_qubits.empty()) bad(where + ": no durations");
        for (double e : p.detector_error_by_qubits) {
          if (!(e >= 0.0 && e < 0.5)) bad(where + ": detector errors must lie in [0, 0.5)");
        }
        for (std::size_t n = 0; n < p.qubits.size(); ++n) {
          const auto ts = p.durations_by_qubits.empty()
                              ? p.durations
                              : std::vector<double>{p.durations_by_qubits[n]};
          for (double t : ts) {
            check(where, [&] {
              ProtocolSetup s = p.setup;
              s.qubits = p.qubits[n];
              s.duration = t;
              s.validate();
            });
          }
        }
      }
      break;
    case ScenarioKind::kOcf:
      if (ocf.qubits.empty() || ocf.durations.empty()) bad("ocf: qubits and durations are required");
      if (ocf.restarts < 1) bad("ocf.restarts must be >= 1");
      for (int q : ocf.qubits) {
        for (double t : ocf.durations) {
          check("ocf", [&] {
            OcfProblem p = ocf.base;
            p.qubits = q;
            p.duration = t;
            p.validate();
          });
        }
      }
      break;
    case ScenarioKind::kTracking:
      if (!(tracking.amplitude > 0.0)) bad("tracking.amplitude must be positive");
      if (!(tracking.oscillation >= 0.0)) bad("tracking.oscillation must be >= 0");
      if (!(tracking.duration > 0.0)) bad("tracking.duration must be positive");
      if (tracking.fo.filters < 2) bad("tracking.fo.filters must be >= 2");
      if (!(tracking.horizon >= tracking.fo.filters * tracking.duration)) {
        bad("tracking.horizon is shorter than one FO block");
      }
      for (int q : tracking.ocf_qubits) {
        if (q < 1) bad("tracking.ocf.qubits must be >= 1");
        check("tracking.ocf", [&] {
          OcfProblem p = tracking.ocf;
          p.qubits = q;
          p.duration = tracking.duration;
          p.validate();
        });
      }
      break;
    case ScenarioKind::kFisher:
      if (fisher.shots < 1) bad("fisher.shots must be >= 1");
      if (fisher.repeats < 2) bad("fisher.repeats must be >= 2");
      if (fisher.directions < 1) bad("fisher.directions must be >= 1");
      check("fisher", [&] { fisher.setup.validate(); });
      break;
  }
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  const Reader reader(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    fail(ErrorCode::kConfig, source + ":" + std::to_string(e.mark.line + 1) + ":" +
                                 std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) fail(ErrorCode::kConfig, source + ": the document must be a mapping");
  return parse_document(root, reader);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string ExperimentOutput::summary_text() const {
  std::string s;
  for (const auto& [k, v] : summary) s += k + " = " + v + "\n";
  return s;
}

const std::string& ExperimentOutput::value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  fail(ErrorCode::kRange, "no summary entry '" + key + "'");
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.kind) {
    case ScenarioKind::kReconstruction: return run_reconstruction(config);
    case ScenarioKind::kOcf: return run_ocf(config);
    case ScenarioKind::kTracking: return run_tracking(config);
    case ScenarioKind::kFisher: return run_fisher(config);
  }
  fail(ErrorCode::kConfig, "unknown scenario kind");
}

void write_output(const ExperimentOutput& output, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + directory.string() + ": " + ec.message());
  const auto put = [&](const std::string& name, const std::string& content) {
    const auto path = directory / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    if (!f) fail(ErrorCode::kIo, "cannot write " + path.string());
  };
  for (const auto& file : output.files) put(file.name, file.content);
  put("summary.txt", output.summary_text());
}

}  // namespace noisespec
