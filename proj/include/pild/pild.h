/* Copyright 2026 The pild authors
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

/* C interface of libpild: open-system dynamics through iterative path-sum
 * dynamical maps, transfer tensors, memory kernels and empirical decay
 * channels.
 *
 * Conventions:
 *   - units: time fs, energies fs^-1 (hbar = 1), jump operators fs^-1/2
 *   - density matrices cross the boundary as two double arrays (re, im) of
 *     d*d entries in column-major order
 *   - superoperator matrices as d^2 x d^2, column-major, acting on
 *     column-stacked density matrices
 *   - every function returning pild_status leaves a message for
 *     pild_last_error() on failure; handles returned through out-parameters
 *     are owned by the caller and released with the matching _free()
 */

#ifndef PILD_H
#define PILD_H

#include <stddef.h>

#if defined(_WIN32)
#define PILD_API __declspec(dllexport)
#else
#define PILD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pild_status {
    PILD_OK = 0,
    PILD_ERR_INTERNAL = 1,
    PILD_ERR_VALIDATION = 2, /* bad input: config, dimensions, preconditions */
    PILD_ERR_BUDGET = 3,     /* path-sum size refused */
    PILD_ERR_NUMERICAL = 4   /* tolerance not met: quadrature, trace, compare */
} pild_status;

/* Thread-local message describing the most recent failure. */
PILD_API const char* pild_last_error(void);
PILD_API const char* pild_version(void);

/* Stage/progress log lines (cache hits, timings). Process-wide; pass NULL to
 * silence. */
typedef void (*pild_log_fn)(const char* line, void* user);
PILD_API void pild_set_log_handler(pild_log_fn fn, void* user);

typedef struct pild_config pild_config;
typedef struct pild_model pild_model;
typedef struct pild_maps pild_maps;
typedef struct pild_tensors pild_tensors;
typedef struct pild_kernel pild_kernel;
typedef struct pild_trajectory pild_trajectory;

/* ---- run configuration + batch pipeline ------------------------------- */

PILD_API pild_status pild_config_load(const char* path, pild_config** out);
PILD_API pild_status pild_config_parse(const char* json_text, const char* base_dir,
                                       pild_config** out);
/* Canonical serialized form; release with pild_string_free. */
PILD_API pild_status pild_config_serialize(const pild_config* config, char** json_out);
PILD_API void pild_string_free(char* text);
PILD_API void pild_config_free(pild_config* config);

typedef struct pild_pipeline_options {
    const char* cache_dir;  /* NULL: "<outputs.directory>/cache" */
    int force_recompute;    /* nonzero: ignore cached stages */
    long long budget;       /* 0: value from the config */
    int threads;            /* 0: value from the config */
} pild_pipeline_options;

/* Generate-and-cache dynamical maps / transfer tensors + kernel / the full
 * pipeline including per-jump-set trajectory files. `options` may be NULL. */
PILD_API pild_status pild_pipeline_maps(const pild_config* config,
                                        const pild_pipeline_options* options);
PILD_API pild_status pild_pipeline_ttm(const pild_config* config,
                                       const pild_pipeline_options* options);
PILD_API pild_status pild_pipeline_run(const pild_config* config,
                                       const pild_pipeline_options* options);

/* Max absolute difference between two exported tables. PILD_OK when within
 * tolerance, PILD_ERR_NUMERICAL when beyond it. */
PILD_API pild_status pild_compare_tables(const char* path_a, const char* path_b,
                                         double tolerance, double* max_abs_diff);

/* ---- in-memory workflow ------------------------------------------------ */

enum { PILD_BATH_OHMIC = 0, PILD_BATH_DRUDE_LORENTZ = 1, PILD_BATH_TABULATED = 2 };

typedef struct pild_bath {
    int kind;
    double xi, omega_c;      /* ohmic: J = (pi/2) xi w exp(-w/omega_c) */
    double lambda, gamma_d;  /* drude: J = 2 lambda gamma_d w / (w^2 + gamma_d^2) */
    const double* omega;     /* tabulated grid, fs^-1, strictly ascending */
    const double* j;         /* tabulated values, fs^-1 */
    int n_points;
    double beta_fs;          /* inverse temperature; INFINITY for T = 0 */
} pild_bath;

/* H0 = eps sigma_z + delta sigma_x, coupling (+1, -1) through the bath. */
PILD_API pild_status pild_model_spin_boson(double eps, double delta, const pild_bath* bath,
                                           pild_model** out);
/* n_sites site states + one ground state appended last; couplings is
 * n_sites x n_sites row-major symmetric with zero diagonal; one bath per
 * site. extraction_site is 0-based, pass -1 for none. */
PILD_API pild_status pild_model_frenkel(int n_sites, const double* site_energies,
                                        const double* couplings, const pild_bath* baths,
                                        int extraction_site, double extraction_timescale_ps,
                                        pild_model** out);
PILD_API int pild_model_dim(const pild_model* model);
PILD_API void pild_model_free(pild_model* model);

/* Augmented propagators E(t_1)..E(t_n_steps); mem_len is the path-sum memory
 * length L. budget 0 means the default (2^28 path states). */
PILD_API pild_status pild_maps_compute(const pild_model* model, double dt_fs, int n_steps,
                                       int mem_len, long long budget, int threads,
                                       pild_maps** out);
PILD_API int pild_maps_count(const pild_maps* maps);
PILD_API int pild_maps_dim(const pild_maps* maps);
/* step is 1-based (E(t_step)); re/im must hold d^2 * d^2 doubles. */
PILD_API pild_status pild_maps_get(const pild_maps* maps, int step, double* re, double* im);
PILD_API void pild_maps_free(pild_maps* maps);

PILD_API pild_status pild_tensors_extract(const pild_maps* maps, int count,
                                          pild_tensors** out);
PILD_API int pild_tensors_count(const pild_tensors* tensors);
PILD_API void pild_tensors_free(pild_tensors* tensors);

enum { PILD_KERNEL_INTERACTION_PICTURE = 0, PILD_KERNEL_SHORT_TIME = 1 };

PILD_API pild_status pild_kernel_build(const pild_tensors* tensors, const pild_model* model,
                                       int mode, pild_kernel** out);
PILD_API int pild_kernel_count(const pild_kernel* kernel);
PILD_API void pild_kernel_free(pild_kernel* kernel);

/* Hybrid kernel + dissipator difference equation. with_model_jumps nonzero
 * applies the model's jump operators, zero propagates without them. */
PILD_API pild_status pild_propagate(const pild_kernel* kernel, const pild_model* model,
                                    const double* rho0_re, const double* rho0_im, int n_steps,
                                    int with_model_jumps, pild_trajectory** out);
/* Memoryless RK4 reference for d rho/dt = -i[H0, rho] + D(rho). */
PILD_API pild_status pild_reference_propagate(const pild_model* model, const double* rho0_re,
                                              const double* rho0_im, double dt_fs, int n_steps,
                                              pild_trajectory** out);

PILD_API int pild_trajectory_steps(const pild_trajectory* trajectory);
PILD_API int pild_trajectory_dim(const pild_trajectory* trajectory);
/* step 0 is the initial state; re/im must hold d*d doubles. */
PILD_API pild_status pild_trajectory_state(const pild_trajectory* trajectory, int step,
                                           double* re, double* im);
/* observables: "populations", "rho", "coherence:i,j" (1-based indices). */
PILD_API pild_status pild_trajectory_export(const pild_trajectory* trajectory,
                                            const pild_model* model,
                                            const char* const* observables, int n_observables,
                                            const char* path);
PILD_API void pild_trajectory_free(pild_trajectory* trajectory);

#ifdef __cplusplus
}
#endif

#endif /* PILD_H */
