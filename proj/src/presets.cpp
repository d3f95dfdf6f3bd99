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

#include "noisespec/presets.hpp"

#include <algorithm>

#include "noisespec/error.hpp"

namespace noisespec {

namespace {

struct Entry {
  PresetInfo info;
  std::string text;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"fig2-fidelity-vs-time", "FO fidelity vs filter time at dephasing 0.4 (K=20, dp=0.01)"},
       R"(scenario: fig2-fidelity-vs-time
description: FO fidelity vs filter operation time at dephasing rate 0.4
kind: reconstruction
seed: 12345
repetitions: 100
spectrum: {preset: double-peak}
noise: {dephasing: 0.4, detector_error: 0.01}
protocols:
  - protocol: fo
    filters: 20
    omega_max: 11.5
    cutoff: 10
    durations: [1, 2, 3, 5, 7, 10]
)"},
      {{"fig3-fidelity-vs-gamma", "FO and AS fidelity at the optimal time for dephasing 0..0.5"},
       R"(scenario: fig3-fidelity-vs-gamma
description: FO and AS fidelity at each protocol's optimal time vs dephasing rate
kind: reconstruction
seed: 12345
repetitions: 100
spectrum: {preset: double-peak}
noise: {dephasing: [0, 0.1, 0.2, 0.3, 0.4, 0.5], detector_error: 0.01}
protocols:
  - protocol: fo
    filters: 20
    omega_max: 11.5
    cutoff: 10
    durations: [1, 2, 3, 5, 7, 10]
  - protocol: as
    filters: 20
    omega_max: 10
    durations: [3, 5, 7, 10, 15, 20, 25]
)"},
      {{"fig4-dephasing0", "FO and AS reconstructions without dephasing (dp=0.01, K=20)"},
       R"(scenario: fig4-dephasing0
description: FO and AS reconstructed spectra at dephasing 0
kind: reconstruction
seed: 12345
repetitions: 100
spectrum: {preset: double-peak}
noise: {dephasing: 0, detector_error: 0.01}
protocols:
  - protocol: fo
    filters: 20
    omega_max: 11.5
    cutoff: 10
    durations: [1, 2, 3, 5, 7, 10]
  - protocol: as
    filters: 20
    omega_max: 10
    durations: [3, 5, 7, 10, 15, 20, 25]
)"},
      {{"fig5-dephasing4", "FO and AS reconstructions at dephasing 0.4 (dp=0.01, K=20)"},
       R"(scenario: fig5-dephasing4
description: FO and AS reconstructed spectra at dephasing 0.4
kind: reconstruction
seed: 12345
repetitions: 100
spectrum: {preset: double-peak}
noise: {dephasing: 0.4, detector_error: 0.01}
protocols:
  - protocol: fo
    filters: 20
    omega_max: 11.5
    cutoff: 10
    durations: [1, 2, 3, 5, 7, 10]
  - protocol: as
    filters: 20
    omega_max: 10
    durations: [3, 5, 7, 10, 15, 20, 25]
)"},
      {{"fig6-leakage-vs-nqubits", "FO fidelity vs qubit count with an out-of-band peak"},
       R"(scenario: fig6-leakage-vs-nqubits
description: FO fidelity vs number of probe qubits, spectrum with a peak above the band
kind: reconstruction
seed: 12345
repetitions: 100
spectrum: {preset: leakage}
calibration: per-configuration
noise: {dephasing: 0, detector_error: 0.01}
protocols:
  - protocol: fo
    filters: 20
    omega_max: 11.5
    cutoff: 10
    qubits: [1, 2, 3, 4, 6]
    durations: [5]
)"},
      {{"fig7-leakage-spectrum", "FO reconstructed spectra for 1, 3 and 6 qubits with leakage"},
       R"(scenario: fig7-leakage-spectrum
description: FO reconstructions of the leakage spectrum for several qubit counts
kind: reconstruction
seed: 12345
repetitions: 100
spectrum: {preset: leakage}
calibration: per-configuration
noise: {dephasing: 0, detector_error: 0.01}
protocols:
  - protocol: fo
    filters: 20
    omega_max: 11.5
    cutoff: 10
    qubits: [1, 3, 6]
    durations: [5]
)"},
      {{"ion-chain", "Trapped-ion chain, per-N state preparation error (ms, rad/ms)"},
       R"(scenario: ion-chain
description: FO fidelity vs qubit count for a trapped-ion chain with per-N preparation error
kind: reconstruction
seed: 12345
repetitions: 100
units: {time: ms, frequency: rad/ms}
# Widths of 1 in units of 2 pi kHz; width_scale = 1 / (2 pi)^2 in rad/ms.
spectrum:
  preset: custom
  components:
    - {amplitude: 1.0, center: 6.283185307179586, width_scale: 0.025330295910584444}
    - {amplitude: 0.7, center: 18.84955592153876, width_scale: 0.05066059182116889}
    - {amplitude: 5.0, center: 62.83185307179586, width_scale: 0.025330295910584444}
calibration: reference
noise: {dephasing: 0.01}
grid: {points: 57505}
protocols:
  - protocol: fo
    filters: 20
    omega_max: 36.12831551628262
    cutoff: 31.41592653589793
    qubits: [1, 2, 3, 4, 6]
    durations_by_qubits: [10, 4, 4, 4, 4]
    detector_error_by_qubits: [0.01, 0.02, 0.03, 0.04, 0.1]
    collective_dephasing: true
)"},
      {{"nv-center", "NV centre, 1/dephasing = 100 us, FO at 80 us and AS at 200 us"},
       R"(scenario: nv-center
description: NV centre in diamond; the dephasing-0.4 example in microseconds (unit 40 us)
kind: reconstruction
seed: 12345
repetitions: 100
units: {time: us, frequency: rad/us}
spectrum:
  preset: custom
  components:
    - {amplitude: 1.0, center: 0.05, width_scale: 1600}
    - {amplitude: 0.7, center: 0.15, width_scale: 3200}
noise: {dephasing: 0.01, detector_error: 0.01}
protocols:
  - protocol: fo
    filters: 20
    omega_max: 0.2875
    cutoff: 0.25
    durations: [80]
    grid: {points: 11501}
  - protocol: as
    filters: 20
    omega_max: 0.25
    durations: [200]
    grid: {points: 10001}
)"},
      {{"fig8-ocf-lorentzian", "Optimized filters for a Lorentzian: fidelity vs time and qubits"},
       R"(scenario: fig8-ocf-lorentzian
description: optimized control filter fidelity vs filter time for 1-6 qubits, single Lorentzian
kind: ocf
seed: 1
spectrum: {preset: single-peak}
ocf:
  qubits: [1, 2, 3, 4, 6]
  durations: [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
  restarts: 10
  cutoff: 10
  out_of_band: penalty
  penalty_weight: 1
  superiterations: 10
  inner_evaluations: 150
  basis_size: 4
  seed: 1
)"},
      {{"fig9-pulse-shape", "Optimized 1-qubit, 6-qubit and continuous filters at T=5"},
       R"(scenario: fig9-pulse-shape
description: optimized modulations and filters for a single Lorentzian at T=5
kind: ocf
seed: 1
spectrum: {preset: single-peak}
ocf:
  qubits: [1, 6, 0]
  durations: [5]
  restarts: 1
  cutoff: 10
  superiterations: 10
  inner_evaluations: 150
  seed: 1
)"},
      {{"fig10-ocf-double", "Optimized 1-qubit, 6-qubit and continuous filters, double Lorentzian"},
       R"(scenario: fig10-ocf-double
description: optimized filters for the double Lorentzian at T=5
kind: ocf
seed: 1
spectrum: {preset: double-peak}
ocf:
  qubits: [1, 6, 0]
  durations: [5]
  restarts: 1
  cutoff: 10
  superiterations: 10
  inner_evaluations: 150
  seed: 1
)"},
      {{"fig12-tracking-slow", "Tracking an oscillating two-component signal at 0.004 pi"},
       R"(scenario: fig12-tracking-slow
description: FO blocks vs optimized filter pairs tracking s2(t) at oscillation 0.004 pi
kind: tracking
seed: 100
noise: {dephasing: 0, detector_error: 0.001}
tracking:
  first: {preset: single-peak}
  second: {preset: double-peak}
  amplitude: 0.006
  oscillation_over_pi: 0.004
  horizon: 500
  duration: 5
  fo: {filters: 10, omega_max: 11.5, cutoff: 10}
  ocf: {qubits: [1, 6], cutoff: 10, superiterations: 10, inner_evaluations: 150, seed: 1}
)"},
      {{"fig13-tracking-fast", "Tracking an oscillating two-component signal at 0.01 pi"},
       R"(scenario: fig13-tracking-fast
description: FO blocks vs optimized filter pairs tracking s2(t) at oscillation 0.01 pi
kind: tracking
seed: 100
noise: {dephasing: 0, detector_error: 0.001}
tracking:
  first: {preset: single-peak}
  second: {preset: double-peak}
  amplitude: 0.006
  oscillation_over_pi: 0.01
  horizon: 500
  duration: 5
  fo: {filters: 10, omega_max: 11.5, cutoff: 10}
  ocf: {qubits: [1, 6], cutoff: 10, superiterations: 10, inner_evaluations: 150, seed: 1}
)"},
      {{"fisher-bound", "Fisher information of the FO readouts and the Cramer-Rao bound"},
       R"(scenario: fisher-bound
description: information operator rank, additivity and estimator spread vs Cramer-Rao bound
kind: fisher
seed: 99
spectrum: {preset: double-peak}
noise: {dephasing: 0}
fisher:
  filters: 20
  omega_max: 11.5
  cutoff: 10
  duration: 5
  shots: 10000
  repeats: 500
  directions: 5
  weighting: exact-bernoulli
)"},
  };
  return entries;
}

const Entry& find(std::string_view name) {
  const auto& all = registry();
  const auto it = std::find_if(all.begin(), all.end(),
                               [&](const Entry& e) { return e.info.name == name; });
  if (it == all.end()) fail(ErrorCode::kConfig, "unknown preset '" + std::string(name) + "'");
  return *it;
}

}  // namespace

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> infos = [] {
    std::vector<PresetInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const std::string& preset_text(std::string_view name) { return find(name).text; }

ExperimentConfig preset_config(std::string_view name) {
  const Entry& e = find(name);
  return parse_config(e.text, "preset:" + e.info.name);
}

}  // namespace noisespec
