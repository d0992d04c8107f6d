/* C interface to the sfopt solver library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returning sfopt_status leaves a thread-local message readable
 * through sfopt_last_error() when it fails. Strings returned through char**
 * are owned by the caller and released with sfopt_string_free(). */
#ifndef SFOPT_SFOPT_H
#define SFOPT_SFOPT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SFOPT_BUILDING_LIBRARY)
#    define SFOPT_API __declspec(dllexport)
#  else
#    define SFOPT_API __declspec(dllimport)
#  endif
#else
#  define SFOPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sfopt_status {
  SFOPT_OK = 0,
  SFOPT_ERR_INVALID_ARGUMENT = 1,
  SFOPT_ERR_INVALID_INSTANCE = 2,
  SFOPT_ERR_NON_FINITE = 3,
  SFOPT_ERR_ORACLE = 4,
  SFOPT_ERR_INCONSISTENT_INPUT = 5,
  SFOPT_ERR_DEGENERATE_SYSTEM = 6,
  SFOPT_ERR_UNCOVERED_BLOCK = 7,
  SFOPT_ERR_INNER_STALLED = 8,
  SFOPT_ERR_REPAIR_UNAVAILABLE = 9,
  SFOPT_ERR_ZETA_EXHAUSTED = 10,
  SFOPT_ERR_INFEASIBLE_BLOCK = 11,
  SFOPT_ERR_IO = 12,
  SFOPT_ERR_PARSE = 13,
  SFOPT_ERR_INTERNAL = 99
} sfopt_status;

typedef struct sfopt_instance sfopt_instance;
typedef struct sfopt_report sfopt_report;

SFOPT_API const char* sfopt_version(void);
/* Message of the last failed call on this thread, or "" . */
SFOPT_API const char* sfopt_last_error(void);
SFOPT_API const char* sfopt_status_name(sfopt_status status);
/* Process exit code used by the command-line tool for a failed call. */
SFOPT_API int sfopt_status_exit_code(sfopt_status status);
SFOPT_API void sfopt_string_free(char* s);

/* Instances. app is "uc", "pev" or "quadratic-box"; N is the horizon (or the
 * block dimension for quadratic-box). overrides_json may be NULL. */
SFOPT_API sfopt_status sfopt_generate(const char* app, int n, int N, uint64_t seed, const char* overrides_json,
                                      sfopt_instance** out);
SFOPT_API sfopt_status sfopt_instance_from_json(const char* json, sfopt_instance** out);
SFOPT_API sfopt_status sfopt_instance_load(const char* path, sfopt_instance** out);
SFOPT_API sfopt_status sfopt_instance_to_json(const sfopt_instance* inst, char** out);
SFOPT_API sfopt_status sfopt_instance_save(const sfopt_instance* inst, const char* path);
SFOPT_API sfopt_status sfopt_instance_dims(const sfopt_instance* inst, int* n, int* m);
SFOPT_API void sfopt_instance_free(sfopt_instance* inst);

/* Objective and ||sum A x - b||_+ of a candidate given as a JSON array of
 * per-block arrays. objective_finite is 0 when some block is outside its domain. */
SFOPT_API sfopt_status sfopt_evaluate(const sfopt_instance* inst, const char* x_json, double* objective,
                                      int* objective_finite, double* violation_plus);

/* Pipeline. config_json may be NULL for defaults. */
SFOPT_API sfopt_status sfopt_solve(const sfopt_instance* inst, const char* config_json, sfopt_report** out);
SFOPT_API sfopt_status sfopt_report_to_json(const sfopt_report* rep, char** out);
SFOPT_API sfopt_status sfopt_report_series_csv(const sfopt_report* rep, char** out);
SFOPT_API sfopt_status sfopt_report_summary(const sfopt_report* rep, double* v_star, double* objective,
                                            double* violation_plus, int* feasible, int* zeta_used);
/* 0 when the final solution is feasible for the original problem, 1 otherwise. */
SFOPT_API int sfopt_report_exit_code(const sfopt_report* rep);
SFOPT_API void sfopt_report_free(sfopt_report* rep);

/* Grid run; spec_json = {"over": "K"|"n", "grid": [...], "seeds": [...], "app",
 * "n", "N", "overrides": {...}, "config": {...}, "instance": {...}?}. */
SFOPT_API sfopt_status sfopt_sweep(const char* spec_json, char** csv_out);

/* Kernels. W is p x N column-major. alpha_out and kept_out need room for
 * min(p, N) entries; kept_count receives the output size. */
SFOPT_API sfopt_status sfopt_exact_caratheodory(int p, int N, const double* W, const double* lam, const double* w_star,
                                                uint64_t seed, double* alpha_out, int* kept_out, int* kept_count,
                                                double* residual);
SFOPT_API sfopt_status sfopt_project_simplex(int len, const double* v, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SFOPT_SFOPT_H */
