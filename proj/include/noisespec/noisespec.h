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

/* C interface of the noisespec library. Every function returns a status
 * code; on failure nspec_last_error() holds a message for the calling thread.
 * Handles are opaque and owned by the caller until passed to the matching
 * nspec_*_free function. */

#ifndef NOISESPEC_NOISESPEC_H_
#define NOISESPEC_NOISESPEC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(NSPEC_BUILDING)
#define NSPEC_API __attribute__((visibility("default")))
#else
#define NSPEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nspec_status {
  NSPEC_OK = 0,
  NSPEC_INVALID_ARGUMENT = 1,
  NSPEC_RANGE = 2,
  NSPEC_CALIBRATION_IMPOSSIBLE = 3,
  NSPEC_GRID_MISMATCH = 4,
  NSPEC_DOMAIN = 5,
  NSPEC_UNSUPPORTED_ORACLE = 6,
  NSPEC_DEGENERATE_BASIS = 7,
  NSPEC_ILL_CONDITIONED = 8,
  NSPEC_UNDEFINED_FIDELITY = 9,
  NSPEC_EMPTY_OPERATOR = 10,
  NSPEC_UNDEFINED_OBJECTIVE = 11,
  NSPEC_DEGENERATE_COMPONENTS = 12,
  NSPEC_CONFIG = 13,
  NSPEC_IO = 14,
  NSPEC_INTERNAL = 99
} nspec_status;

typedef struct nspec_config nspec_config;
typedef struct nspec_result nspec_result;

NSPEC_API const char* nspec_version(void);

/* Message of the most recent failure on this thread; "" when none. */
NSPEC_API const char* nspec_last_error(void);
NSPEC_API const char* nspec_status_name(nspec_status status);
/* Library module that raises the status, e.g. "reconstruct" or "cli". */
NSPEC_API const char* nspec_status_module(nspec_status status);

/* Built-in presets, in a fixed order. Strings live as long as the library. */
NSPEC_API size_t nspec_preset_count(void);
NSPEC_API nspec_status nspec_preset_info(size_t index, const char** name,
                                         const char** description);
NSPEC_API nspec_status nspec_preset_text(const char* name, const char** yaml);

NSPEC_API nspec_status nspec_config_from_preset(const char* name, nspec_config** out);
NSPEC_API nspec_status nspec_config_load(const char* path, nspec_config** out);
/* `source` names the text in diagnostics; may be NULL. */
NSPEC_API nspec_status nspec_config_parse(const char* yaml, const char* source,
                                          nspec_config** out);
NSPEC_API nspec_status nspec_config_set_seed(nspec_config* config, uint64_t seed);
NSPEC_API nspec_status nspec_config_set_repetitions(nspec_config* config, int repetitions);
/* 0 selects the hardware concurrency. Outputs do not depend on it. */
NSPEC_API nspec_status nspec_config_set_workers(nspec_config* config, int workers);
NSPEC_API nspec_status nspec_config_scenario(const nspec_config* config, const char** name);
NSPEC_API void nspec_config_free(nspec_config* config);

NSPEC_API nspec_status nspec_run(const nspec_config* config, nspec_result** out);

NSPEC_API size_t nspec_result_file_count(const nspec_result* result);
/* Borrowed pointers, valid until the result is freed. */
NSPEC_API nspec_status nspec_result_file(const nspec_result* result, size_t index,
                                         const char** name, const char** content,
                                         size_t* size);
NSPEC_API nspec_status nspec_result_summary(const nspec_result* result, const char** text);
NSPEC_API nspec_status nspec_result_value(const nspec_result* result, const char* key,
                                          const char** value);
/* Writes every CSV and summary.txt into `directory`, creating it if needed. */
NSPEC_API nspec_status nspec_result_write(const nspec_result* result, const char* directory);
NSPEC_API void nspec_result_free(nspec_result* result);

#ifdef __cplusplus
}
#endif

#endif /* NOISESPEC_NOISESPEC_H_ */
