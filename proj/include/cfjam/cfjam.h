// SPDX-License-Identifier: Apache-2.0
//
// cfjam: jamming detection for cell-free MIMO networks with dynamic graphs
// Copyright 2026 The cfjam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
/* C interface to the cfjam library. All functions are thread-compatible; error text is per thread. */
#ifndef CFJAM_H
#define CFJAM_H

#include <stddef.h>

#if defined(CFJAM_BUILDING)
#define CFJAM_API __attribute__((visibility("default")))
#else
#define CFJAM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cfjam_status {
  CFJAM_OK = 0,
  CFJAM_E_INVALID_ARGUMENT = 1,
  CFJAM_E_INVALID_GEOMETRY = 2,
  CFJAM_E_CONFIGURATION = 3,
  CFJAM_E_IO = 4,
  CFJAM_E_SCHEMA = 5,
  CFJAM_E_LENGTH_MISMATCH = 6,
  CFJAM_E_SHAPE_MISMATCH = 7,
  CFJAM_E_NOT_FOUND = 8,
  CFJAM_E_INTERNAL = 9
} cfjam_status;

typedef struct cfjam_config cfjam_config;
typedef struct cfjam_model cfjam_model;
typedef struct cfjam_sequence cfjam_sequence;

/* Receives one progress line; `line` is valid only during the call. */
typedef void (*cfjam_line_fn)(const char* line, void* user);

CFJAM_API const char* cfjam_version(void);
/* Message of the last failed call on this thread, or "" if none. */
CFJAM_API const char* cfjam_last_error(void);
CFJAM_API const char* cfjam_status_name(cfjam_status status);
CFJAM_API void cfjam_string_free(char* s);

/* Run configuration: defaults, then file, then individual overrides. */
CFJAM_API cfjam_status cfjam_config_create(cfjam_config** out);
CFJAM_API void cfjam_config_destroy(cfjam_config* config);
CFJAM_API cfjam_status cfjam_config_load(cfjam_config* config, const char* path);
CFJAM_API cfjam_status cfjam_config_set(cfjam_config* config, const char* section, const char* key, const char* value);
/* Resolved configuration as INI text; free with cfjam_string_free. */
CFJAM_API cfjam_status cfjam_config_to_string(const cfjam_config* config, char** out);

/* Commands. `out_dir` may be NULL to use the configured paths. `report` (optional) receives the
   command's summary text; free with cfjam_string_free. */
CFJAM_API cfjam_status cfjam_generate(const cfjam_config* config, const char* out_dir, cfjam_line_fn progress,
                                      void* user, char** report);
CFJAM_API cfjam_status cfjam_train(const cfjam_config* config, const char* out_dir, cfjam_line_fn progress,
                                   void* user, char** report);
CFJAM_API cfjam_status cfjam_eval(const cfjam_config* config, const char* out_dir, int sweep_tau,
                                  cfjam_line_fn progress, void* user, char** report);

/* Checkpoints and single-sequence inference. */
CFJAM_API cfjam_status cfjam_model_load(const char* path, cfjam_model** out);
CFJAM_API void cfjam_model_destroy(cfjam_model* model);
CFJAM_API cfjam_status cfjam_model_parameter_count(const cfjam_model* model, size_t* out);

CFJAM_API cfjam_status cfjam_sequence_load(const char* path, cfjam_sequence** out);
CFJAM_API void cfjam_sequence_destroy(cfjam_sequence* sequence);
CFJAM_API cfjam_status cfjam_sequence_info(const cfjam_sequence* sequence, int* label, int* tau, int* n_steps);

/* Probability that the sequence is jammed. */
CFJAM_API cfjam_status cfjam_predict(const cfjam_model* model, const cfjam_sequence* sequence, double* p_jammed);

#ifdef __cplusplus
}
#endif

#endif
