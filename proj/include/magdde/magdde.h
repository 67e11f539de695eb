/*
 * C interface to the magdde delay-equation solver.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a magdde_status;
 * on failure magdde_last_error() describes the problem (thread-local, valid
 * until the next failing call on the same thread). Output buffers are
 * caller-allocated; the `len` argument is checked against the required size.
 */
#ifndef MAGDDE_H
#define MAGDDE_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(MAGDDE_BUILDING)
#    define MAGDDE_API __declspec(dllexport)
#  else
#    define MAGDDE_API __declspec(dllimport)
#  endif
#else
#  define MAGDDE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum magdde_status {
  MAGDDE_OK = 0,
  MAGDDE_INVALID_ARGUMENT = 1,
  MAGDDE_OUT_OF_RANGE = 2,
  MAGDDE_NUMERICAL_FAILURE = 3,
  MAGDDE_WARNING_AS_ERROR = 4,
  MAGDDE_INTERNAL_ERROR = 5
} magdde_status;

typedef enum magdde_stability {
  MAGDDE_STABLE = 0,
  MAGDDE_UNSTABLE = 1,
  MAGDDE_MARGINAL = 2
} magdde_stability;

typedef struct magdde_problem magdde_problem;
typedef struct magdde_trajectory magdde_trajectory;
typedef struct magdde_monodromy magdde_monodromy;

/* Return nonzero to abort the running computation with MAGDDE_WARNING_AS_ERROR. */
typedef int (*magdde_warning_fn)(const char* message, void* user);

MAGDDE_API const char* magdde_version(void);
MAGDDE_API const char* magdde_last_error(void);
MAGDDE_API const char* magdde_status_name(magdde_status status);

/* ---- problems ------------------------------------------------------------ */

typedef struct magdde_problem_info {
  int dimension;
  double tau;
  int has_period;
  double period;
  int quasilinear;
  int has_exact;
  int has_reference_multiplier;
  double reference_re;
  double reference_im;
  int conservative;
  int solution_component;
} magdde_problem_info;

/* Builtins: "example1", "mathieu", "nonlinear-scalar", "sir". `keys`/`values`
 * hold `count` parameter overrides. */
MAGDDE_API magdde_status magdde_problem_create(const char* name, const char* const* keys, const double* values,
                                               size_t count, magdde_problem** out);
MAGDDE_API void magdde_problem_destroy(magdde_problem* problem);
MAGDDE_API magdde_status magdde_problem_get_info(const magdde_problem* problem, magdde_problem_info* out);
/* Strings live as long as the problem. */
MAGDDE_API const char* magdde_problem_description(const magdde_problem* problem);
MAGDDE_API const char* magdde_problem_provenance(const magdde_problem* problem);
/* Exact solution x(t); `len` must equal the dimension. */
MAGDDE_API magdde_status magdde_problem_exact(const magdde_problem* problem, double t, double* out, size_t len);

/* ---- solve --------------------------------------------------------------- */

typedef struct magdde_solve_options {
  int n;
  int m;
  int order;
  double t_final;
  int store_steps;
  magdde_warning_fn on_warning;
  void* warning_user;
} magdde_solve_options;

MAGDDE_API void magdde_solve_options_init(magdde_solve_options* options);
MAGDDE_API magdde_status magdde_solve(const magdde_problem* problem, const magdde_solve_options* options,
                                      magdde_trajectory** out);
/* Continue from `state` (length d(N+1)) at t = start_interval * tau. */
MAGDDE_API magdde_status magdde_solve_resume(const magdde_problem* problem, const magdde_solve_options* options,
                                             int start_interval, const double* state, size_t len,
                                             magdde_trajectory** out);
MAGDDE_API void magdde_trajectory_destroy(magdde_trajectory* trajectory);

typedef struct magdde_interval_info {
  int index;
  double t_start;
  double t_end;
  int steps;
  size_t stored_steps;
} magdde_interval_info;

MAGDDE_API size_t magdde_trajectory_state_size(const magdde_trajectory* trajectory);
MAGDDE_API size_t magdde_trajectory_interval_count(const magdde_trajectory* trajectory);
MAGDDE_API magdde_status magdde_trajectory_interval(const magdde_trajectory* trajectory, size_t k,
                                                    magdde_interval_info* out);
MAGDDE_API magdde_status magdde_trajectory_state(const magdde_trajectory* trajectory, size_t k, double* out,
                                                 size_t len);
/* Discretized history (or resume state) the integration started from. */
MAGDDE_API magdde_status magdde_trajectory_initial_state(const magdde_trajectory* trajectory, double* out,
                                                         size_t len);
/* Times t_end + theta_j, j = 0..N; `len` must be N+1. */
MAGDDE_API magdde_status magdde_trajectory_node_times(const magdde_trajectory* trajectory, size_t k, double* out,
                                                      size_t len);
MAGDDE_API magdde_status magdde_trajectory_step(const magdde_trajectory* trajectory, size_t k, size_t step,
                                                double* time, double* out, size_t len);
/* Interpolated solution x(t); `len` must equal the dimension. */
MAGDDE_API magdde_status magdde_trajectory_evaluate(const magdde_trajectory* trajectory, double t, double* out,
                                                    size_t len);
/* Mean absolute node error of interval k against the problem's exact solution. */
MAGDDE_API magdde_status magdde_trajectory_mean_error(const magdde_trajectory* trajectory,
                                                      const magdde_problem* problem, size_t k, int component,
                                                      double* out);

/* ---- monodromy ----------------------------------------------------------- */

typedef struct magdde_monodromy_options {
  int n;
  int m;
  int order;
  int periods;
  magdde_warning_fn on_warning;
  void* warning_user;
} magdde_monodromy_options;

MAGDDE_API void magdde_monodromy_options_init(magdde_monodromy_options* options);
MAGDDE_API magdde_status magdde_monodromy_compute(const magdde_problem* problem,
                                                  const magdde_monodromy_options* options, magdde_monodromy** out);
MAGDDE_API void magdde_monodromy_destroy(magdde_monodromy* result);
MAGDDE_API size_t magdde_monodromy_size(const magdde_monodromy* result);
/* Row-major, `len` must be size*size. */
MAGDDE_API magdde_status magdde_monodromy_matrix(const magdde_monodromy* result, double* out, size_t len);
/* Sorted by modulus, real part, imaginary part (descending). */
MAGDDE_API magdde_status magdde_monodromy_multipliers(const magdde_monodromy* result, double* re, double* im,
                                                      size_t len);
MAGDDE_API magdde_status magdde_monodromy_verdict(const magdde_monodromy* result, double tol,
                                                  magdde_stability* out);

#ifdef __cplusplus
}
#endif

#endif /* MAGDDE_H */
