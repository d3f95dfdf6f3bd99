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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "noisespec/fisher.hpp"
#include "noisespec/ocf.hpp"
#include "noisespec/pipeline.hpp"
#include "noisespec/spectra.hpp"
#include "noisespec/tracking.hpp"

namespace noisespec {

const char* library_version();

enum class ScenarioKind { kReconstruction, kOcf, kTracking, kFisher };

const char* to_string(ScenarioKind kind);

/// How S0 is fixed when a scenario runs several configurations.
enum class Calibration {
  kPerConfiguration,  // median c_k = 1 separately for every (protocol, N, T)
  kReference,         // calibrated on the first configuration, then held fixed
  kNone,              // the declared scale is used as is
};

struct SpectrumSpec {
  std::string preset = "double-peak";  // single-peak | double-peak | leakage | custom | file
  double scale = 1.0;
  std::vector<Lorentzian> components;  // custom only
  std::string file;                    // two-column CSV (frequency, value); file only

  SpectralDensity build() const;
};

/// One protocol family swept over qubit counts and candidate durations.
struct ProtocolPlan {
  ProtocolSetup setup;
  std::vector<int> qubits = {1};
  std::vector<double> durations = {5.0};
  std::vector<double> durations_by_qubits;       // replaces `durations`, one per qubit count
  std::vector<double> detector_error_by_qubits;  // replaces the global value
};

struct NoisePlan {
  std::vector<double> dephasing = {0.0};
  double detector_error = 0.0;
  std::uint64_t shots = 0;  // 0 disables binomial sampling
};

struct OcfPlan {
  OcfProblem base;  // target filled from the spectrum section
  std::vector<int> qubits = {1};
  std::vector<double> durations = {5.0};
  int restarts = 1;
};

struct TrackingPlan {
  SpectrumSpec first{"single-peak", 1.0, {}, {}};
  SpectrumSpec second{"double-peak", 1.0, {}, {}};
  double amplitude = 1.0;       // common S0 of both components
  double oscillation = 0.0;     // rad per unit time
  double horizon = 500.0;
  double duration = 5.0;
  FoTrackingSetup fo;
  std::vector<int> ocf_qubits = {1};
  OcfProblem ocf;               // budget and grid of the filter pair
};

struct FisherPlan {
  ProtocolSetup setup;
  std::uint64_t shots = 10000;
  int repeats = 500;
  int directions = 5;
  FisherWeighting weighting = FisherWeighting::kExactBernoulli;
};

struct ExperimentConfig {
  std::string scenario;
  std::string description;
  ScenarioKind kind = ScenarioKind::kReconstruction;
  std::uint64_t seed = 1;
  int repetitions = 100;
  int workers = 1;
  std::string time_unit = "1";
  std::string frequency_unit = "1";
  SpectrumSpec spectrum;
  Calibration calibration = Calibration::kPerConfiguration;
  NoisePlan noise;
  std::vector<ProtocolPlan> protocols;
  OcfPlan ocf;
  TrackingPlan tracking;
  FisherPlan fisher;

  /// Throws kConfig naming the offending field.
  void validate() const;
};

/// Parses YAML text. Diagnostics carry `source:line:column` and unknown keys
/// are rejected.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

struct OutputFile {
  std::string name;
  std::string content;
};

struct ExperimentOutput {
  std::vector<OutputFile> files;                             // CSV artifacts
  std::vector<std::pair<std::string, std::string>> summary;  // flat key = value

  std::string summary_text() const;
  /// Value of a summary key; throws kRange when absent.
  const std::string& value(const std::string& key) const;
};

/// Runs the scenario. CSV contents depend only on the configuration, never on
/// the worker count.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Writes every CSV plus summary.txt into `directory` (created if missing).
void write_output(const ExperimentOutput& output, const std::filesystem::path& directory);

}  // namespace noisespec
