/*
 * Copyright 2026 the sempath authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the sempath library: penalized structural equation
 * modeling over a penalty path.
 *
 * Conventions:
 *   - Every fallible call returns a sempath_status; SEMPATH_OK is 0.
 *   - On failure, sempath_last_error() returns a thread-local message
 *     (valid until the next failing call on the same thread).
 *   - Objects are opaque handles created by the parse/load/run calls and
 *     released with the matching free call. Strings returned through char**
 *     out-parameters are released with sempath_string_free.
 *   - Parameter ids are 1-based, matching the numbering that
 *     sempath_model_matrices() prints.
 */

#ifndef SEMPATH_H
#define SEMPATH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SEMPATH_OK = 0,
  SEMPATH_ERR_PARSE = 1,          /* model text rejected */
  SEMPATH_ERR_INVALID_ARG = 2,    /* bad configuration or argument */
  SEMPATH_ERR_DATA = 3,           /* data file / moments problem */
  SEMPATH_ERR_MODEL = 4,          /* compile error (unscaled latent, ...) */
  SEMPATH_ERR_NOT_CONVERGED = 5,  /* no converged fit on the path */
  SEMPATH_ERR_IO = 6,
  SEMPATH_ERR_BOUNDS = 7,         /* index or buffer out of range */
  SEMPATH_ERR_INTERNAL = 8
} sempath_status;

typedef enum {
  SEMPATH_PEN_NONE = 0,
  SEMPATH_PEN_LASSO = 1,
  SEMPATH_PEN_RIDGE = 2,
  SEMPATH_PEN_ENET = 3,
  SEMPATH_PEN_ALASSO = 4,
  SEMPATH_PEN_SCAD = 5,
  SEMPATH_PEN_MCP = 6
} sempath_penalty_kind;

typedef enum { SEMPATH_METRIC_BIC = 0, SEMPATH_METRIC_RMSEA = 1 } sempath_metric;

typedef enum {
  SEMPATH_METHOD_DEFAULT = 0, /* quasi-Newton when q > 30 */
  SEMPATH_METHOD_GRAD = 1,
  SEMPATH_METHOD_QN = 2
} sempath_opt_method;

typedef struct sempath_model sempath_model;
typedef struct sempath_data sempath_data;
typedef struct sempath_fit sempath_fit;
typedef struct sempath_path sempath_path;

const char* sempath_version(void);
const char* sempath_last_error(void);
void sempath_string_free(char* s);

/* ---- model ------------------------------------------------------------ */

/* growth_mode != 0 adds the mean structure (observed intercepts fixed at 0,
 * latent means free). */
sempath_status sempath_model_parse(const char* text, int growth_mode,
                                   sempath_model** out);
sempath_status sempath_model_parse_file(const char* path, int growth_mode,
                                        sempath_model** out);
void sempath_model_free(sempath_model* model);

/* Validation findings as text; error/warning counts through out-params
 * (either may be NULL). */
sempath_status sempath_model_validate(const sempath_model* model,
                                      const sempath_data* data_or_null,
                                      char** report, int* n_errors, int* n_warnings);

/* Compiled parameter table. Compilation happens lazily against the data's
 * column order (or declaration order when data is NULL); parameter ids do
 * not depend on it. */
sempath_status sempath_model_param_count(const sempath_model* model,
                                         const sempath_data* data_or_null, int* out);
sempath_status sempath_model_param_name(const sempath_model* model,
                                        const sempath_data* data_or_null,
                                        int param_id, char* buf, size_t buf_size);
/* RAM matrix report (A, S, F, and M when present). */
sempath_status sempath_model_matrices(const sempath_model* model,
                                      const sempath_data* data_or_null, char** out);
/* Resolve a penalty-set selector: "all" (every directed path), a
 * comma-separated list of 1-based ids / id ranges ("1:7" or "1-7"), or
 * parameter labels. n_ids in: capacity of ids, out: count. ids may be NULL
 * to query the count. */
sempath_status sempath_model_resolve_pen(const sempath_model* model,
                                         const sempath_data* data_or_null,
                                         const char* selector, int* ids, int* n_ids);

/* ---- data ------------------------------------------------------------- */

/* CSV with a header row. Raw rows by default (listwise deletion on
 * empty/NA cells); a leading "# n=<N>" comment marks a covariance matrix,
 * optionally with "# means=...". */
sempath_status sempath_data_load_csv(const char* path, sempath_data** out);
sempath_status sempath_data_from_rows(const double* rows, int n, int p,
                                      const char* const* names, sempath_data** out);
sempath_status sempath_data_from_cov(const double* cov, const double* means_or_null,
                                     int p, long n_obs, const char* const* names,
                                     sempath_data** out);
void sempath_data_free(sempath_data* data);
long sempath_data_nobs(const sempath_data* data);
int sempath_data_nvar(const sempath_data* data);
long sempath_data_dropped_rows(const sempath_data* data);
sempath_status sempath_data_var_name(const sempath_data* data, int index, char* buf,
                                     size_t buf_size);

/* ---- configuration ---------------------------------------------------- */

typedef struct {
  sempath_penalty_kind kind;
  double lambda;      /* single-fit value; paths override per grid point */
  double alpha;       /* elastic net, default 0.5 */
  double gamma;       /* SCAD/MCP, default 3.7 */
  const int* pars_pen; /* NULL: all directed paths */
  int n_pars_pen;
} sempath_penalty_spec;

typedef struct {
  sempath_opt_method method;
  int max_iter;           /* <= 0: default 5000 */
  double tol;             /* <= 0: default 1e-5 */
  int n_starts;           /* <= 0: default 1 */
  double variance_floor;  /* < 0: default 1e-4 */
  uint64_t seed;
} sempath_opt_spec;

typedef struct {
  int n_lambda;           /* <= 0: default 1 */
  double jump;            /* <= 0: default 0.05 */
  double lambda_start;    /* default 0 */
  sempath_metric metric;
  int warm_start;         /* default (0 passed as-is; use 1 for sequential warm starts) */
  int threads;            /* parallel fits when warm_start == 0; <= 0: auto */
} sempath_path_spec;

void sempath_penalty_spec_init(sempath_penalty_spec* spec);
void sempath_opt_spec_init(sempath_opt_spec* spec);
void sempath_path_spec_init(sempath_path_spec* spec);

/* ---- fitting ----------------------------------------------------------- */

sempath_status sempath_fit_run(const sempath_model* model, const sempath_data* data,
                               const sempath_penalty_spec* penalty,
                               const sempath_opt_spec* opt, sempath_fit** out);
void sempath_fit_free(sempath_fit* fit);
double sempath_fit_f_ml(const sempath_fit* fit);
double sempath_fit_f_regsem(const sempath_fit* fit);
int sempath_fit_conv(const sempath_fit* fit);
int sempath_fit_iterations(const sempath_fit* fit);
sempath_status sempath_fit_params(const sempath_fit* fit, double* buf, int buf_len);
/* "bic", "rmsea", "fml", "df", "effective_df" */
sempath_status sempath_fit_index(const sempath_fit* fit, const char* name, double* out);

/* Runs the lambda grid; holdout (optional) adds holdout_* indices per row.
 * Returns SEMPATH_ERR_NOT_CONVERGED with a valid *out when no grid point
 * converged (the table is still inspectable). */
sempath_status sempath_path_run(const sempath_model* model, const sempath_data* data,
                                const sempath_data* holdout_or_null,
                                const sempath_penalty_spec* penalty,
                                const sempath_path_spec* path,
                                const sempath_opt_spec* opt, sempath_path** out);
void sempath_path_free(sempath_path* path);
int sempath_path_n_rows(const sempath_path* path);
int sempath_path_n_params(const sempath_path* path);
sempath_status sempath_path_row(const sempath_path* path, int row, double* lambda,
                                int* conv, double* f_ml);
sempath_status sempath_path_row_index(const sempath_path* path, int row,
                                      const char* name, double* out);
sempath_status sempath_path_row_params(const sempath_path* path, int row, double* buf,
                                       int buf_len);
/* -1 when no row converged. */
int sempath_path_final_index(const sempath_path* path);
int sempath_path_n_penalized(const sempath_path* path);
sempath_status sempath_path_penalized_ids(const sempath_path* path, int* ids, int n_ids);

/* ---- penalty math (curve emission, bindings) --------------------------- */

double sempath_penalty_value(sempath_penalty_kind kind, double lambda, double alpha,
                             double gamma, double weight, double theta);
double sempath_prox(double z, double t, sempath_penalty_kind kind, double alpha,
                    double gamma, double weight);

/* ---- simulation -------------------------------------------------------- */

/* Growth design: fills row-major n x 14 (x1..x4, c1..c10). */
sempath_status sempath_simulate_growth(int n, uint64_t seed, double* out);
/* One-factor design: fills row-major n x n_indicators. resid_sd may be NULL
 * for unit residual standard deviations. */
sempath_status sempath_simulate_cfa(int n, const double* loadings,
                                    const double* resid_sd_or_null, int n_indicators,
                                    uint64_t seed, double* out);
/* Model text matching the built-in designs. */
sempath_status sempath_growth_model_text(char** out);
sempath_status sempath_cfa_model_text(int n_indicators, char** out);

typedef struct {
  sempath_penalty_kind method; /* SEMPATH_PEN_NONE = maximum likelihood */
  int n_converged;
  double false_positive_rate;
  double false_negative_rate;
  double convergence_rate;
  long fp_count, tn_count, fn_count, tp_count;
} sempath_replication_row;

/* Growth-design replication study; one output row per method. threads <= 0
 * picks min(hardware, SEMPATH_THREADS). */
sempath_status sempath_replication_study(int n_obs, int n_reps, uint64_t seed,
                                         const sempath_penalty_kind* methods,
                                         int n_methods, const sempath_path_spec* path,
                                         const sempath_opt_spec* opt, int threads,
                                         sempath_replication_row* out_rows);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEMPATH_H */
