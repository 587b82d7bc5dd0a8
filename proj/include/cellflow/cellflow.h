/* C interface to the cellflow library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_destroy function (which accepts NULL). Every fallible call
 * returns a cf_status; on failure cf_last_error() describes the problem for
 * the calling thread until its next failing call.
 *
 * Flow matrices are edge_count x sample_count, column-major.
 */
#ifndef CELLFLOW_H
#define CELLFLOW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CELLFLOW_API __declspec(dllexport)
#else
#define CELLFLOW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
  CF_OK = 0,
  CF_ERR_INVALID_ARGUMENT = 1,
  CF_ERR_PARSE = 2,
  CF_ERR_SOLVER = 3,
  CF_ERR_GENERATION = 4,
  CF_ERR_IO = 5,
  CF_ERR_INTERNAL = 6
} cf_status;

typedef struct cf_skeleton cf_skeleton;
typedef struct cf_flows cf_flows;
typedef struct cf_cells cf_cells;
typedef struct cf_result cf_result;

CELLFLOW_API const char* cf_version(void);
CELLFLOW_API const char* cf_last_error(void);

/* ---- skeleton ---------------------------------------------------------- */

CELLFLOW_API cf_status cf_skeleton_create(size_t node_count, const uint32_t* tails,
                                          const uint32_t* heads, size_t edge_count,
                                          cf_skeleton** out);
CELLFLOW_API cf_status cf_skeleton_load(const char* path, cf_skeleton** out);
CELLFLOW_API cf_status cf_skeleton_save(const cf_skeleton* skeleton, const char* path);
CELLFLOW_API size_t cf_skeleton_node_count(const cf_skeleton* skeleton);
CELLFLOW_API size_t cf_skeleton_edge_count(const cf_skeleton* skeleton);
CELLFLOW_API cf_status cf_skeleton_edge(const cf_skeleton* skeleton, size_t edge, uint32_t* tail,
                                        uint32_t* head);
CELLFLOW_API void cf_skeleton_destroy(cf_skeleton* skeleton);

/* ---- flows ------------------------------------------------------------- */

CELLFLOW_API cf_status cf_flows_create(size_t edge_count, size_t sample_count,
                                       const double* values, cf_flows** out);
/* The row count is checked against the skeleton's edge count. */
CELLFLOW_API cf_status cf_flows_load(const char* path, const cf_skeleton* skeleton,
                                     cf_flows** out);
CELLFLOW_API cf_status cf_flows_save(const cf_flows* flows, const char* path);
CELLFLOW_API size_t cf_flows_edge_count(const cf_flows* flows);
CELLFLOW_API size_t cf_flows_sample_count(const cf_flows* flows);
CELLFLOW_API const double* cf_flows_data(const cf_flows* flows);
CELLFLOW_API void cf_flows_destroy(cf_flows* flows);

/* ---- cells ------------------------------------------------------------- */

/* Cells are validated against, and canonicalized for, the given skeleton. */
CELLFLOW_API cf_status cf_cells_create(const cf_skeleton* skeleton, const uint32_t* nodes,
                                       const size_t* lengths, size_t cell_count, cf_cells** out);
CELLFLOW_API cf_status cf_cells_load(const char* path, const cf_skeleton* skeleton,
                                     cf_cells** out);
CELLFLOW_API cf_status cf_cells_save(const cf_cells* cells, const char* path);
CELLFLOW_API size_t cf_cells_count(const cf_cells* cells);
CELLFLOW_API size_t cf_cells_length(const cf_cells* cells, size_t index);
/* Copies the canonical node cycle of cell `index`; capacity must be >= its length. */
CELLFLOW_API cf_status cf_cells_nodes(const cf_cells* cells, size_t index, uint32_t* out,
                                      size_t capacity);
/* Fraction of `truth` present in `found`. */
CELLFLOW_API cf_status cf_recovery_accuracy(const cf_cells* found, const cf_cells* truth,
                                            double* out);
CELLFLOW_API void cf_cells_destroy(cf_cells* cells);

/* ---- synthetic data ---------------------------------------------------- */

typedef enum cf_family { CF_FAMILY_TRIANGULATION = 0, CF_FAMILY_SMALLWORLD = 1 } cf_family;

typedef struct cf_synth_config {
  cf_family family;
  size_t node_count;
  size_t cell_count;
  size_t min_cell_length;
  size_t max_cell_length;
  double sigma_c;
  double sigma_n;
  size_t sample_count;
  double prune_prob;
  double extra_edge_prob;
  uint64_t seed;
} cf_synth_config;

CELLFLOW_API void cf_synth_config_default(cf_synth_config* config);
/* Any output pointer may be NULL if that part is not wanted. */
CELLFLOW_API cf_status cf_generate(const cf_synth_config* config, cf_skeleton** skeleton,
                                   cf_flows** flows, cf_cells** truth);

/* ---- inference --------------------------------------------------------- */

typedef enum cf_heuristic {
  CF_HEURISTIC_MAX = 0,
  CF_HEURISTIC_SIMILARITY = 1,
  CF_HEURISTIC_TRIANGLES = 2,
  CF_HEURISTIC_TRUE_CELLS = 3
} cf_heuristic;

typedef struct cf_solver_config {
  double atol;
  double btol;
  int max_iterations; /* 0: automatic */
  size_t threads;     /* 0: CELLFLOW_THREADS or hardware concurrency */
} cf_solver_config;

typedef struct cf_infer_config {
  cf_heuristic heuristic;
  size_t candidates;
  int clusters;
  int has_max_cells;
  size_t max_cells;
  int has_epsilon;
  double epsilon;
  int has_b2_nnz_budget;
  size_t b2_nnz_budget;
  cf_solver_config solver;
  uint64_t seed;
} cf_infer_config;

CELLFLOW_API void cf_solver_config_default(cf_solver_config* config);
CELLFLOW_API void cf_infer_config_default(cf_infer_config* config);
/* Accepts "max", "similarity", "triangles", "true-cells". */
CELLFLOW_API cf_status cf_parse_heuristic(const char* name, cf_heuristic* out);

/* `truth` may be NULL unless the heuristic is CF_HEURISTIC_TRUE_CELLS. */
CELLFLOW_API cf_status cf_infer(const cf_skeleton* skeleton, const cf_flows* flows,
                                const cf_infer_config* config, const cf_cells* truth,
                                cf_result** out);

typedef struct cf_iteration {
  double loss;
  size_t cells_count;
  size_t b2_nnz;
  double wall_time_ms;
} cf_iteration;

CELLFLOW_API size_t cf_result_iteration_count(const cf_result* result);
CELLFLOW_API cf_status cf_result_iteration(const cf_result* result, size_t index,
                                           cf_iteration* out);
CELLFLOW_API double cf_result_initial_loss(const cf_result* result);
CELLFLOW_API double cf_result_final_loss(const cf_result* result);
CELLFLOW_API double cf_result_flow_norm(const cf_result* result);
/* "max_cells", "epsilon", "zero_residual", "no_candidates" or "b2_nnz_budget". */
CELLFLOW_API const char* cf_result_stop_reason(const cf_result* result);
CELLFLOW_API cf_status cf_result_cells(const cf_result* result, cf_cells** out);
/* Metrics CSV; a non-NULL `truth` adds the recovery column. */
CELLFLOW_API cf_status cf_result_write_metrics(const cf_result* result, const cf_cells* truth,
                                               const char* path);
CELLFLOW_API void cf_result_destroy(cf_result* result);

/* ---- decomposition ----------------------------------------------------- */

/* Writes per-sample gradient/curl/harmonic norms as CSV. `cells` may be NULL. */
CELLFLOW_API cf_status cf_decompose(const cf_skeleton* skeleton, const cf_flows* flows,
                                    const cf_cells* cells, const cf_solver_config* solver,
                                    const char* path);

#ifdef __cplusplus
}
#endif

#endif /* CELLFLOW_H */
