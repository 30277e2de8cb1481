/*
 * dyadreg: inference for linear regression with dyadic data.
 *
 * C API over the core library: OLS with the dyadic-robust sandwich
 * variance estimator, eigenvalue-clamp PSD corrections, t-statistics with
 * normal and t_kappa critical values, dependency-graph diagnostics, and a
 * seeded Monte Carlo coverage harness.
 *
 * Conventions: every fallible function returns a dyadreg_status
 * (DYADREG_OK on success) and writes results through out-parameters.
 * Objects returned through handle out-parameters are owned by the caller
 * and released with the matching _free function; _free tolerates NULL.
 * On failure, dyadreg_last_error() returns a thread-local message.
 */
#ifndef DYADREG_H_
#define DYADREG_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define DYADREG_VERSION "1.0.0"

typedef enum dyadreg_status {
    DYADREG_OK = 0,
    DYADREG_ERR_INVALID_ARGUMENT = 1,
    DYADREG_ERR_SELF_PAIR = 2,
    DYADREG_ERR_DUPLICATE_DYAD = 3,
    DYADREG_ERR_UNIT_OUT_OF_RANGE = 4,
    DYADREG_ERR_EMPTY_GRAPH = 5,
    DYADREG_ERR_ISOLATED_UNIT = 6,
    DYADREG_ERR_INDEX_OUT_OF_RANGE = 7,
    DYADREG_ERR_INVALID_ELL = 8,
    DYADREG_ERR_NON_POSITIVE_SCALE = 9,
    DYADREG_ERR_NON_FINITE = 10,
    DYADREG_ERR_NO_CONVERGENCE = 11,
    DYADREG_ERR_OUT_OF_DOMAIN = 12,
    DYADREG_ERR_NON_POSITIVE_DF = 13,
    DYADREG_ERR_RANK_DEFICIENT = 14,
    DYADREG_ERR_TOO_FEW_OBSERVATIONS = 15,
    DYADREG_ERR_DIMENSION_MISMATCH = 16,
    DYADREG_ERR_NON_POSITIVE_VARIANCE = 17,
    DYADREG_ERR_G_TOO_SMALL = 18,
    DYADREG_ERR_CONFIG_INVALID = 19,
    DYADREG_ERR_EMPTY_INPUT = 20,
    DYADREG_ERR_PARSE = 21,
    DYADREG_ERR_IO = 22,
    DYADREG_ERR_UNKNOWN = 99
} dyadreg_status;

const char* dyadreg_version(void);
const char* dyadreg_strerror(dyadreg_status status);
/* Thread-local detail message for the last failing call on this thread. */
const char* dyadreg_last_error(void);

/* Frees strings returned through char** out-parameters. */
void dyadreg_string_free(char* s);

/* ---------- graphs ---------- */

typedef struct dyadreg_graph dyadreg_graph;

typedef struct dyadreg_graph_diag {
    int32_t num_units;
    int64_t num_dyads;
    int32_t m_high;            /* max_g M_g */
    int32_t m_low;             /* min_g M_g */
    double med_degree;         /* sample median of the M_g */
    int32_t dependency_degree; /* 2(M^H - 1), or 1 for an edgeless overlap graph */
    double kappa;              /* G * med / M^H */
} dyadreg_graph_diag;

/* Builds from parallel arrays of 1-based unit ids; dyad n keeps input
 * position n. Rejects self-pairs, duplicates (unordered), out-of-range
 * and isolated units. */
dyadreg_status dyadreg_graph_build(const int32_t* unit_g, const int32_t* unit_h,
                                   int64_t num_dyads, int32_t num_units,
                                   dyadreg_graph** out);

/* model: 'D' (complete), 'S' (sparse), 'B' (hub-and-spoke). */
dyadreg_status dyadreg_graph_model(char model, int32_t num_units, dyadreg_graph** out);

void dyadreg_graph_free(dyadreg_graph* graph);

int64_t dyadreg_graph_num_dyads(const dyadreg_graph* graph);
int32_t dyadreg_graph_num_units(const dyadreg_graph* graph);
dyadreg_status dyadreg_graph_dyad(const dyadreg_graph* graph, int64_t n,
                                  int32_t* unit_g, int32_t* unit_h);
/* degrees: caller buffer of num_units entries, M_g for unit g at [g-1]. */
dyadreg_status dyadreg_graph_degrees(const dyadreg_graph* graph, int32_t* degrees);
dyadreg_status dyadreg_graph_overlaps(const dyadreg_graph* graph, int64_t n,
                                      int64_t m, int32_t* out);
dyadreg_status dyadreg_graph_diagnostics(const dyadreg_graph* graph,
                                         dyadreg_graph_diag* out);
/* (N/D_N)^(1/ell) * D_N * bound_a / sigma_n. */
dyadreg_status dyadreg_janson_ratio(const dyadreg_graph* graph, double sigma_n,
                                    double bound_a, int32_t ell, double* out);

/* format: "edgelist" (one g,h per line) or "dot". */
dyadreg_status dyadreg_graph_export(const dyadreg_graph* graph, const char* format,
                                    char** out);
/* num_units 0 infers G from the largest unit id in the text. */
dyadreg_status dyadreg_graph_import_edgelist(const char* text, int32_t num_units,
                                             dyadreg_graph** out);

/* ---------- datasets and estimation ---------- */

typedef struct dyadreg_dataset dyadreg_dataset;

/* y: num_dyads outcomes; x: row-major num_dyads x num_regressors. The
 * graph is copied into the dataset and may be freed afterwards. */
dyadreg_status dyadreg_dataset_create(const dyadreg_graph* graph, const double* y,
                                      const double* x, int32_t num_regressors,
                                      dyadreg_dataset** out);
void dyadreg_dataset_free(dyadreg_dataset* data);

int64_t dyadreg_dataset_num_rows(const dyadreg_dataset* data);
int32_t dyadreg_dataset_num_regressors(const dyadreg_dataset* data);
dyadreg_status dyadreg_dataset_row(const dyadreg_dataset* data, int64_t n,
                                   int32_t* unit_g, int32_t* unit_h, double* y,
                                   double* x /* num_regressors entries */);

/* Simulated draw from one of the study designs: y = 1 + 0*x + u.
 * error_spec: 0 iid, 1 unit-shock, 2 two-group (rate r in [0,1]).
 * Identical (master_seed, stream_id) reproduce identical datasets. */
dyadreg_status dyadreg_simulate_dataset(char model, int32_t num_units,
                                        int32_t error_spec, double r,
                                        uint64_t master_seed, uint64_t stream_id,
                                        dyadreg_dataset** out);

typedef enum dyadreg_psd_policy {
    DYADREG_PSD_NONE = 0,
    DYADREG_PSD_CLAMP_ZERO = 1,
    DYADREG_PSD_CLAMP_EPS = 2
} dyadreg_psd_policy;

typedef struct dyadreg_analysis dyadreg_analysis;

/* OLS fit plus the dyadic-robust sandwich variance under the given PSD
 * policy (eps ignored unless policy is CLAMP_EPS). */
dyadreg_status dyadreg_analyze(const dyadreg_dataset* data, dyadreg_psd_policy policy,
                               double eps, dyadreg_analysis** out);
void dyadreg_analysis_free(dyadreg_analysis* analysis);

int32_t dyadreg_analysis_num_regressors(const dyadreg_analysis* analysis);
/* Coefficient and dyadic-robust standard error (from the corrected V). */
dyadreg_status dyadreg_analysis_coef(const dyadreg_analysis* analysis, int32_t k,
                                     double* beta, double* se);
dyadreg_status dyadreg_analysis_tstat(const dyadreg_analysis* analysis, int32_t k,
                                      double beta0, double* out);
/* critical: 0 normal, 1 t_kappa. */
dyadreg_status dyadreg_analysis_ci(const dyadreg_analysis* analysis, int32_t k,
                                   double level, int32_t critical, double beta0,
                                   double* lo, double* hi);
/* which: 0 the corrected (used) matrix, 1 the raw sandwich. Row-major K*K. */
dyadreg_status dyadreg_analysis_vhat(const dyadreg_analysis* analysis, int32_t which,
                                     double* out);
int32_t dyadreg_analysis_clamped(const dyadreg_analysis* analysis);
dyadreg_status dyadreg_analysis_graph_diag(const dyadreg_analysis* analysis,
                                           dyadreg_graph_diag* out);
dyadreg_status dyadreg_analysis_residual(const dyadreg_analysis* analysis, int64_t n,
                                         double* out);

/* ---------- distribution helpers ---------- */

dyadreg_status dyadreg_normal_quantile(double p, double* out);
dyadreg_status dyadreg_t_quantile(double p, double df, double* out);

/* ---------- Monte Carlo coverage ---------- */

typedef struct dyadreg_cell_spec {
    char model;         /* 'D', 'S', 'B' */
    int32_t num_units;
    int32_t error_spec; /* 0 iid, 1 unit-shock, 2 two-group */
    double r;           /* two-group rate */
} dyadreg_cell_spec;

typedef struct dyadreg_run_params {
    int32_t replications;
    double level;
    dyadreg_psd_policy psd;
    double eps;
    int32_t criticals; /* 0 normal, 1 t_kappa, 2 both */
    uint64_t master_seed;
    int32_t workers;
} dyadreg_run_params;

/* Coverage percentages carry -1 when that critical family was not run. */
typedef struct dyadreg_cell_result {
    dyadreg_cell_spec spec;
    int64_t num_dyads;
    double kappa;
    double coverage_normal;
    double mc_se_normal;
    double coverage_tkappa;
    double mc_se_tkappa;
    int32_t clamped_reps;
    int32_t failed_reps;
} dyadreg_cell_result;

typedef struct dyadreg_table dyadreg_table;

typedef void (*dyadreg_progress_fn)(const dyadreg_cell_result* cell, size_t index,
                                    size_t total, void* user);

/* One coverage cell. */
dyadreg_status dyadreg_run_cell(const dyadreg_cell_spec* spec,
                                const dyadreg_run_params* params,
                                dyadreg_cell_result* out);

/* table_id 1..3 reproduce the reference grids over g_list; criticals in
 * params select extra columns on the same seeds when set to both. */
dyadreg_status dyadreg_run_table(int32_t table_id, const int32_t* g_list,
                                 int32_t num_g, const dyadreg_run_params* params,
                                 dyadreg_progress_fn progress, void* user,
                                 dyadreg_table** out);

/* An explicit list of cells. */
dyadreg_status dyadreg_run_cells(const dyadreg_cell_spec* specs, int32_t num_specs,
                                 const dyadreg_run_params* params,
                                 dyadreg_progress_fn progress, void* user,
                                 dyadreg_table** out);

/* Flat key-value config document (see README for the schema). */
dyadreg_status dyadreg_run_config(const char* config_text,
                                  dyadreg_progress_fn progress, void* user,
                                  dyadreg_table** out);

void dyadreg_table_free(dyadreg_table* table);
int64_t dyadreg_table_num_cells(const dyadreg_table* table);
dyadreg_status dyadreg_table_cell(const dyadreg_table* table, int64_t index,
                                  dyadreg_cell_result* out);
/* format: "csv" or "text". */
dyadreg_status dyadreg_table_render(const dyadreg_table* table, const char* format,
                                    char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DYADREG_H_ */
