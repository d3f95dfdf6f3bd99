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

#include "noisespec/noisespec.h"

#include <exception>
#include <new>
#include <string>

#include "noisespec/error.hpp"
#include "noisespec/experiment.hpp"
#include "noisespec/presets.hpp"

struct nspec_config {
  noisespec::ExperimentConfig config;
};

struct nspec_result {
  noisespec::ExperimentOutput output;
  std::string summary;
};

namespace {

thread_local std::string last_error;

nspec_status to_status(noisespec::ErrorCode code) {
  return static_cast<nspec_status>(static_cast<int>(code));
}

// Runs `fn`, translating exceptions into a status and the thread's message.
template <class Fn>
nspec_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return NSPEC_OK;
  } catch (const noisespec::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NSPEC_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NSPEC_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return NSPEC_INTERNAL;
  }
}

nspec_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return NSPEC_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* nspec_version(void) { return noisespec::library_version(); }

const char* nspec_last_error(void) { return last_error.c_str(); }

const char* nspec_status_name(nspec_status status) {
  if (status == NSPEC_INTERNAL) return "internal error";
  if (status < NSPEC_OK || status > NSPEC_IO) return "unknown status";
  return noisespec::to_string(static_cast<noisespec::ErrorCode>(status));
}

const char* nspec_status_module(nspec_status status) {
  switch (status) {
    case NSPEC_OK: return "none";
    case NSPEC_CALIBRATION_IMPOSSIBLE: return "spectra";
    case NSPEC_DOMAIN: return "modulation";
    case NSPEC_GRID_MISMATCH:
    case NSPEC_UNSUPPORTED_ORACLE: return "filterfn";
    case NSPEC_DEGENERATE_BASIS:
    case NSPEC_ILL_CONDITIONED:
    case NSPEC_UNDEFINED_FIDELITY: return "reconstruct";
    case NSPEC_EMPTY_OPERATOR: return "fisher";
    case NSPEC_UNDEFINED_OBJECTIVE: return "ocf";
    case NSPEC_DEGENERATE_COMPONENTS: return "tracking";
    case NSPEC_CONFIG:
    case NSPEC_IO: return "cli";
    default: return "core";
  }
}

size_t nspec_preset_count(void) { return noisespec::list_presets().size(); }

nspec_status nspec_preset_info(size_t index, const char** name, const char** description) {
  return guarded([&] {
    const auto& all = noisespec::list_presets();
    if (index >= all.size()) noisespec::fail(noisespec::ErrorCode::kRange, "preset index out of range");
    if (name != nullptr) *name = all[index].name.c_str();
    if (description != nullptr) *description = all[index].description.c_str();
  });
}

nspec_status nspec_preset_text(const char* name, const char** yaml) {
  if (name == nullptr || yaml == nullptr) return null_argument("name or yaml");
  return guarded([&] { *yaml = noisespec::preset_text(name).c_str(); });
}

nspec_status nspec_config_from_preset(const char* name, nspec_config** out) {
  if (name == nullptr || out == nullptr) return null_argument("name or out");
  *out = nullptr;
  return guarded([&] { *out = new nspec_config{noisespec::preset_config(name)}; });
}

nspec_status nspec_config_load(const char* path, nspec_config** out) {
  if (path == nullptr || out == nullptr) return null_argument("path or out");
  *out = nullptr;
  return guarded([&] { *out = new nspec_config{noisespec::load_config(path)}; });
}

nspec_status nspec_config_parse(const char* yaml, const char* source, nspec_config** out) {
  if (yaml == nullptr || out == nullptr) return null_argument("yaml or out");
  *out = nullptr;
  return guarded([&] {
    *out = new nspec_config{noisespec::parse_config(yaml, source != nullptr ? source : "<config>")};
  });
}

nspec_status nspec_config_set_seed(nspec_config* config, uint64_t seed) {
  if (config == nullptr) return null_argument("config");
  config->config.seed = seed;
  return NSPEC_OK;
}

nspec_status nspec_config_set_repetitions(nspec_config* config, int repetitions) {
  if (config == nullptr) return null_argument("config");
  if (repetitions < 1) {
    last_error = "repetitions must be >= 1";
    return NSPEC_CONFIG;
  }
  config->config.repetitions = repetitions;
  return NSPEC_OK;
}

nspec_status nspec_config_set_workers(nspec_config* config, int workers) {
  if (config == nullptr) return null_argument("config");
  if (workers < 0) {
    last_error = "workers must be >= 0";
    return NSPEC_CONFIG;
  }
  config->config.workers = workers;
  return NSPEC_OK;
}

nspec_status nspec_config_scenario(const nspec_config* config, const char** name) {
  if (config == nullptr || name == nullptr) return null_argument("config or name");
  *name = config->config.scenario.c_str();
  return NSPEC_OK;
}

void nspec_config_free(nspec_config* config) { delete config; }

nspec_status nspec_run(const nspec_config* config, nspec_result** out) {
  if (config == nullptr || out == nullptr) return null_argument("config or out");
  *out = nullptr;
  return guarded([&] {
    auto* r = new nspec_result{noisespec::run_experiment(config->config), {}};
    r->summary = r->output.summary_text();
    *out = r;
  });
}

size_t nspec_result_file_count(const nspec_result* result) {
  return result == nullptr ? 0 : result->output.files.size();
}

nspec_status nspec_result_file(const nspec_result* result, size_t index, const char** name,
                               const char** content, size_t* size) {
  if (result == nullptr) return null_argument("result");
  if (index >= result->output.files.size()) {
    last_error = "file index out of range";
    return NSPEC_RANGE;
  }
  const auto& f = result->output.files[index];
  if (name != nullptr) *name = f.name.c_str();
  if (content != nullptr) *content = f.content.c_str();
  if (size != nullptr) *size = f.content.size();
  return NSPEC_OK;
}

nspec_status nspec_result_summary(const nspec_result* result, const char** text) {
  if (result == nullptr || text == nullptr) return null_argument("result or text");
  *text = result->summary.c_str();
  return NSPEC_OK;
}

nspec_status nspec_result_value(const nspec_result* result, const char* key, const char** value) {
  if (result == nullptr || key == nullptr || value == nullptr) {
    return null_argument("result, key or value");
  }
  return guarded([&] { *value = result->output.value(key).c_str(); });
}

nspec_status nspec_result_write(const nspec_result* result, const char* directory) {
  if (result == nullptr || directory == nullptr) return null_argument("result or directory");
  return guarded([&] { noisespec::write_output(result->output, directory); });
}

void nspec_result_free(nspec_result* result) { delete result; }

}  // extern "C"
