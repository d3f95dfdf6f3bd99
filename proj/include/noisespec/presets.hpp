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

#include <string>
#include <string_view>
#include <vector>

#include "noisespec/experiment.hpp"

namespace noisespec {

struct PresetInfo {
  std::string name;
  std::string description;
};

/// Built-in scenarios in a fixed order.
const std::vector<PresetInfo>& list_presets();

/// YAML text of a preset, exactly as `export-config` prints it.
/// Throws kConfig for an unknown name.
const std::string& preset_text(std::string_view name);

ExperimentConfig preset_config(std::string_view name);

}  // namespace noisespec
