/* Copyright 2026 The ganlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the ganlab shared library.
 *
 * The library runs synthetic GAN training experiments: six training
 * objectives and two gradient penalties on tasks whose true distribution is
 * known in closed form, evaluated by the squared Frechet distance between
 * Gaussians. Experiments are described by a JSON config, resolved into a
 * self-contained manifest, and executed into an output directory
 * (manifest.json, CSV traces, parameter snapshots, SVG figures).
 * Re-running a manifest reproduces every output byte for byte.
 *
 * All functions return ganlab_status; on failure ganlab_last_error() holds
 * a message for the calling thread.
 */

#ifndef GANLAB_H_
#define GANLAB_H_

#include <stddef.h>

#if defined(_WIN32)
#define GANLAB_API __declspec(dllexport)
#elif defined(__GNUC__)
#define GANLAB_API __attribute__((visibility("default")))
#else
#define GANLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ganlab_status {
  GANLAB_OK = 0,
  GANLAB_ERROR = 1,          /* unexpected failure */
  GANLAB_ERROR_CONFIG = 2,   /* invalid command/config/manifest */
  GANLAB_ERROR_NUMERIC = 3,  /* a loss left the finite range */
  GANLAB_ERROR_IO = 4        /* filesystem failure */
} ganlab_status;

/* Version string of the library, e.g. "0.1.0". */
GANLAB_API const char* ganlab_version(void);

/* Message of the calling thread's most recent failure; empty if none.
 * The pointer stays valid until the next failing call on this thread. */
GANLAB_API const char* ganlab_last_error(void);

/* Opaque experiment: one resolved command ready to execute. */
typedef struct ganlab_experiment ganlab_experiment;

/* Resolves `config_json` (may be NULL or empty for defaults) for one of the
 * commands "exp1", "exp2", "parallel", "figure2" or "sweep", with outputs
 * destined for `out_dir`. On success *out owns the resolved experiment. */
GANLAB_API ganlab_status ganlab_experiment_create(const char* command,
                                                  const char* config_json,
                                                  const char* out_dir,
                                                  ganlab_experiment** out);

/* The experiment's fully resolved manifest JSON. Owned by the handle. */
GANLAB_API const char* ganlab_experiment_manifest(const ganlab_experiment* exp);

/* Writes the manifest into its output directory, runs the experiment and
 * emits all outputs there. */
GANLAB_API ganlab_status ganlab_experiment_run(ganlab_experiment* exp);

GANLAB_API void ganlab_experiment_destroy(ganlab_experiment* exp);

/* Re-executes a stored manifest file. Pass NULL to keep the manifest's own
 * output directory, or a path to redirect the outputs. */
GANLAB_API ganlab_status ganlab_run_manifest(const char* manifest_path,
                                             const char* out_dir_override);

/* Squared Frechet distance between two d-dimensional Gaussians given as a
 * mean (length d) and a row-major covariance (d*d, symmetric PSD). */
GANLAB_API ganlab_status ganlab_frechet_squared(const double* mu_p, const double* cov_p,
                                                const double* mu_q, const double* cov_q,
                                                size_t d, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GANLAB_H_ */
