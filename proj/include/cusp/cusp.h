/* C interface to the cusp-domain approximation library.
 *
 * Every function returns a cusp_status. On failure the message is available through
 * cusp_last_error() on the calling thread until the next call on that thread.
 * Strings returned through char** are heap allocated; release them with cusp_string_free.
 */
#ifndef CUSP_CUSP_H
#define CUSP_CUSP_H

#include <stddef.h>
#include <stdint.h>

#if defined(CUSP_BUILDING_LIBRARY)
#define CUSP_API __attribute__((visibility("default")))
#else
#define CUSP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cusp_status {
  CUSP_OK = 0,
  CUSP_ERR_PARAMETER = 1,
  CUSP_ERR_DOMAIN = 2,
  CUSP_ERR_CONFIG = 3,
  CUSP_ERR_DEGENERATE = 4,
  CUSP_ERR_INFEASIBLE = 5,
  CUSP_ERR_PRECONDITION = 6,
  CUSP_ERR_SIZE = 7,
  CUSP_ERR_EVALUATION = 8,
  CUSP_ERR_DATA = 9,
  CUSP_ERR_IO = 10,
  CUSP_ERR_RANGE = 11,
  CUSP_ERR_NULL_ARGUMENT = 12,
  CUSP_ERR_INTERNAL = 13
} cusp_status;

typedef struct cusp_hset cusp_hset;
typedef struct cusp_domain cusp_domain;
typedef struct cusp_tree cusp_tree;

CUSP_API const char* cusp_version(void);
CUSP_API const char* cusp_status_name(cusp_status status);
CUSP_API const char* cusp_last_error(void);
/* {"error": {"kind": ..., "message": ...}} for the last failure on this thread. */
CUSP_API const char* cusp_last_error_json(void);
CUSP_API void cusp_string_free(char* s);

/* Rates. params_json keys: p, q, r, d, sigma, theta, width, lambda.
 * hset_variant: -1 generic domain, 0 general h-set, 1 plane h-set.
 * tau_n >= 2 adds the value of the selected tau factor at n. */
CUSP_API cusp_status cusp_rates(const char* params_json, int hset_variant, double tau_n, char** out_json);
/* Unique t >= 1 with t^gamma psi_Lambda(t) = s; lambda is "const" or "logpow:B". */
CUSP_API cusp_status cusp_solve_scale(double gamma, const char* lambda, double s, double* out_t);

/* h-sets. kind is "cantor" or "plane". */
CUSP_API cusp_status cusp_hset_build(double theta, int d, int depth, const char* kind, cusp_hset** out);
CUSP_API cusp_status cusp_hset_from_json(const char* json, cusp_hset** out);
CUSP_API cusp_status cusp_hset_to_json(const cusp_hset* h, char** out_json);
CUSP_API cusp_status cusp_hset_cells_csv(const cusp_hset* h, int level, char** out_csv);
CUSP_API cusp_status cusp_hset_distance(const cusp_hset* h, const double* x, double* out);
/* Ball-mass ratios over t = 2^-1 .. 2^-depth. */
CUSP_API cusp_status cusp_hset_regularity(const cusp_hset* h, size_t samples, uint64_t seed, int threads,
                                          char** out_json);
/* #J_{k,1} h(2^-n_k) for k = 0..levels on the cusp domain of exponent sigma over the set. */
CUSP_API cusp_status cusp_hset_near_counts(const cusp_hset* h, double sigma, int levels, char** out_json);
CUSP_API void cusp_hset_free(cusp_hset* h);

/* Domains. */
CUSP_API cusp_status cusp_domain_from_json(const char* json, cusp_domain** out);
CUSP_API cusp_status cusp_domain_constant(int d, double value, double sigma, cusp_domain** out);
CUSP_API cusp_status cusp_domain_hset_cusp(double sigma, const cusp_hset* h, cusp_domain** out);
CUSP_API cusp_status cusp_domain_to_json(const cusp_domain* dom, char** out_json);
CUSP_API cusp_status cusp_domain_dim(const cusp_domain* dom, int* out);
CUSP_API cusp_status cusp_domain_psi(const cusp_domain* dom, const double* xprime, double* out);
CUSP_API cusp_status cusp_domain_contains(const cusp_domain* dom, const double* x, int* out);
CUSP_API cusp_status cusp_domain_measure(const cusp_domain* dom, double* out);
CUSP_API void cusp_domain_free(cusp_domain* dom);

/* Partition trees. pruned != 0 builds the h-set variant. max_cells = 0 keeps the default cap. */
CUSP_API cusp_status cusp_tree_build(const cusp_domain* dom, int levels, int pruned, uint64_t max_cells,
                                     cusp_tree** out);
CUSP_API cusp_status cusp_tree_size(const cusp_tree* t, size_t* out);
CUSP_API cusp_status cusp_tree_level_size(const cusp_tree* t, int level, size_t* out);
CUSP_API cusp_status cusp_tree_cells_csv(const cusp_tree* t, char** out_csv);
CUSP_API cusp_status cusp_tree_audit(const cusp_tree* t, char** out_json);
CUSP_API cusp_status cusp_tree_volume_check(const cusp_tree* t, size_t samples, uint64_t seed, char** out_json);
CUSP_API void cusp_tree_free(cusp_tree* t);
/* Predicted cells per level without building (JSON array). */
CUSP_API cusp_status cusp_predicted_cell_counts(const cusp_domain* dom, int levels, int pruned, char** out_json);

/* Adaptive approximation of a named field; record lists budgets for the CSV trace
 * (budget,pieces,error,fringe_defect). out_json may be NULL. */
CUSP_API cusp_status cusp_approx(const cusp_domain* dom, const char* field, uint64_t budget, int r, double p,
                                 double q, const uint64_t* record, size_t record_count, char** out_csv,
                                 char** out_json);
/* Residual of the order-r projection of a named field on the unit box in L_q. */
CUSP_API cusp_status cusp_box_residual(const char* field, int d, int r, double q, double* out);

/* Tree summation operators. tree_json: {"parents": [...], "g": [...], "v": [...]}; p, q override the file.
 * method: spectral, ascent or exhaustive. */
CUSP_API cusp_status cusp_treeop_norm(const char* tree_json, double p, double q, const char* method, uint64_t seed,
                                      char** out_json);
CUSP_API cusp_status cusp_treeop_bound(const char* tree_json, double p, double q, double a, double b,
                                       uint64_t seed, char** out_json);

/* Empirical checks. */
CUSP_API cusp_status cusp_verify_bumps(double theta, double sigma, int d, int kmax, double p, double q, int r,
                                       char** out_csv, char** out_json);
CUSP_API cusp_status cusp_verify_widths(const cusp_domain* dom, int r, int grid, int n_max, char** out_csv);
CUSP_API cusp_status cusp_interval_widths(int grid, int r, int n_max, char** out_csv);
CUSP_API cusp_status cusp_fit_slope(const double* n, const double* e, size_t count, char** out_json);
CUSP_API cusp_status cusp_fit_slope_csv(const char* csv_text, const char* xcol, const char* ycol, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* CUSP_CUSP_H */
