/*
 * Copyright 2026 The oscstab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to liboscstab.
 *
 * Every object is an opaque handle released by its *_destroy function.
 * Functions return an oscstab_status; on failure the message is available
 * from oscstab_last_error() on the calling thread until the next call.
 * Indices (fields, pairs) are zero-based. Matrices are column-major.
 */
#ifndef OSCSTAB_OSCSTAB_H
#define OSCSTAB_OSCSTAB_H

#include <stddef.h>

#if defined(_WIN32)
#define OSCSTAB_API __declspec(dllexport)
#else
#define OSCSTAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum oscstab_status {
  OSCSTAB_OK = 0,
  OSCSTAB_ERR_INVALID_ARGUMENT = 1,
  OSCSTAB_ERR_CONFIG = 2,
  OSCSTAB_ERR_EVALUATION = 3,
  OSCSTAB_ERR_SINGULAR = 4,
  OSCSTAB_ERR_IO = 5,
  OSCSTAB_ERR_INTERNAL = 6
} oscstab_status;

typedef struct oscstab_config oscstab_config;
typedef struct oscstab_report oscstab_report;
typedef struct oscstab_system oscstab_system;
typedef struct oscstab_law oscstab_law;
typedef struct oscstab_trajectory oscstab_trajectory;

OSCSTAB_API const char* oscstab_version(void);
OSCSTAB_API const char* oscstab_last_error(void);
OSCSTAB_API const char* oscstab_status_name(oscstab_status status);

/* ---- run configuration ---- */

OSCSTAB_API oscstab_status oscstab_config_create(oscstab_config** out);
OSCSTAB_API void oscstab_config_destroy(oscstab_config* config);
OSCSTAB_API oscstab_status oscstab_config_set(oscstab_config* config, const char* key,
                                              const char* value);
/* Parses "key = value" lines; '#' starts a comment. */
OSCSTAB_API oscstab_status oscstab_config_load_file(oscstab_config* config, const char* path);
OSCSTAB_API oscstab_status oscstab_config_load_text(oscstab_config* config, const char* text);
OSCSTAB_API oscstab_status oscstab_config_validate(const oscstab_config* config);
/* Names of all settable keys, for building command-line flags. */
OSCSTAB_API size_t oscstab_config_key_count(void);
OSCSTAB_API const char* oscstab_config_key_name(size_t index);
/* The resolved initial state. Fails unless n matches the system dimension. */
OSCSTAB_API oscstab_status oscstab_config_initial_state(const oscstab_config* config, double* x0,
                                                        int n);

/* ---- subcommands ----
 * Each writes its artifacts into the configured output directory and
 * returns a report. A non-OK status means no report was produced. */

OSCSTAB_API oscstab_status oscstab_run(const oscstab_config* config, oscstab_report** out);
OSCSTAB_API oscstab_status oscstab_compare(const oscstab_config* config, oscstab_report** out);
OSCSTAB_API oscstab_status oscstab_verify(const oscstab_config* config, oscstab_report** out);

OSCSTAB_API void oscstab_report_destroy(oscstab_report* report);
/* 0 converged or all checks passed, 2 diverged, 3 not converged or a check failed. */
OSCSTAB_API int oscstab_report_exit_code(const oscstab_report* report);
OSCSTAB_API const char* oscstab_report_json(const oscstab_report* report);
OSCSTAB_API const char* oscstab_report_text(const oscstab_report* report);
OSCSTAB_API const char* oscstab_report_output_dir(const oscstab_report* report);
OSCSTAB_API double oscstab_report_wall_seconds(const oscstab_report* report);

/* ---- systems ---- */

OSCSTAB_API size_t oscstab_system_registered_count(void);
OSCSTAB_API const char* oscstab_system_registered_name(size_t index);
OSCSTAB_API oscstab_status oscstab_system_create(const char* name, oscstab_system** out);
OSCSTAB_API void oscstab_system_destroy(oscstab_system* system);
OSCSTAB_API int oscstab_system_state_dim(const oscstab_system* system);
OSCSTAB_API int oscstab_system_input_dim(const oscstab_system* system);
OSCSTAB_API int oscstab_system_pair_count(const oscstab_system* system);
OSCSTAB_API oscstab_status oscstab_system_pair(const oscstab_system* system, int index, int* i,
                                               int* j);
/* out receives n values. */
OSCSTAB_API oscstab_status oscstab_system_field(const oscstab_system* system, int k,
                                                const double* x, double* out);
OSCSTAB_API oscstab_status oscstab_system_lie_bracket(const oscstab_system* system, int i, int j,
                                                      const double* x, double* out);
/* out receives n*n values, column-major: fields then brackets in pair order.
 * condition is the reciprocal-condition based estimate, +inf when singular. */
OSCSTAB_API oscstab_status oscstab_system_assemble_F(const oscstab_system* system,
                                                     const double* x, double* out,
                                                     double* condition);

/* ---- feedback laws ---- */

/* Builds the law (and its Lyapunov function) described by the config. */
OSCSTAB_API oscstab_status oscstab_law_create(const oscstab_config* config, oscstab_law** out);
OSCSTAB_API void oscstab_law_destroy(oscstab_law* law);
OSCSTAB_API int oscstab_law_state_dim(const oscstab_law* law);
OSCSTAB_API int oscstab_law_input_dim(const oscstab_law* law);
/* u receives m values. */
OSCSTAB_API oscstab_status oscstab_law_eval(const oscstab_law* law, const double* x, double t,
                                            double* u);
OSCSTAB_API oscstab_status oscstab_law_lyapunov(const oscstab_law* law, const double* x,
                                                double* value);
OSCSTAB_API oscstab_status oscstab_law_certificate(const oscstab_law* law, const double* x,
                                                   double* W, double* alpha, double* beta);

/* ---- trajectories ---- */

/* sampled != 0 selects sample-and-hold feedback. */
OSCSTAB_API oscstab_status oscstab_integrate(const oscstab_law* law, const double* x0,
                                             double horizon, int substeps, int record_stride,
                                             int sampled, oscstab_trajectory** out);
OSCSTAB_API void oscstab_trajectory_destroy(oscstab_trajectory* traj);
OSCSTAB_API size_t oscstab_trajectory_size(const oscstab_trajectory* traj);
OSCSTAB_API size_t oscstab_trajectory_window_count(const oscstab_trajectory* traj);
OSCSTAB_API int oscstab_trajectory_diverged(const oscstab_trajectory* traj);
/* x receives n values; t, V and norm may be NULL. */
OSCSTAB_API oscstab_status oscstab_trajectory_sample(const oscstab_trajectory* traj, size_t index,
                                                     double* t, double* x, double* V,
                                                     double* norm);
OSCSTAB_API oscstab_status oscstab_trajectory_write_csv(const oscstab_trajectory* traj,
                                                        const char* path);
OSCSTAB_API oscstab_status oscstab_trajectory_write_windows(const oscstab_trajectory* traj,
                                                            const char* path);

#ifdef __cplusplus
}
#endif

#endif /* OSCSTAB_OSCSTAB_H */
