/* kinturb C API: kinetic flow solver behind opaque handles and error codes.
 *
 * Every function that can fail returns a kt_status; KT_OK is 0. On failure,
 * kt_last_error() returns a thread-local description valid until the next
 * failing call on the same thread.
 */
#ifndef KINTURB_H
#define KINTURB_H

#include <stddef.h>

#if defined(_WIN32)
#define KINTURB_API __declspec(dllexport)
#else
#define KINTURB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kt_status {
  KT_OK = 0,
  KT_ERR_INVALID_CONFIG = 1,
  KT_ERR_INVALID_ARGUMENT = 2,
  KT_ERR_STABILITY = 3,
  KT_ERR_NO_CONVERGENCE = 4,
  KT_ERR_IO = 5,
  KT_ERR_INTERNAL = 6
} kt_status;

KINTURB_API const char* kt_version(void);
KINTURB_API const char* kt_status_name(kt_status status);
KINTURB_API const char* kt_last_error(void);

/* ---- configuration ----------------------------------------------------- */

typedef struct kt_config kt_config;

/* Parses a line-based `key = value` configuration (# starts a comment). */
KINTURB_API kt_status kt_config_parse_text(const char* text, kt_config** out);
KINTURB_API kt_status kt_config_parse_file(const char* path, kt_config** out);

/* Applies one key = value override and revalidates. */
KINTURB_API kt_status kt_config_set(kt_config* cfg, const char* key,
                                    const char* value);

/* Resolved configuration and derived quantities as text; free the result
 * with kt_string_free. */
KINTURB_API kt_status kt_config_describe(const kt_config* cfg, char** out);

KINTURB_API void kt_string_free(char* s);
KINTURB_API void kt_config_free(kt_config* cfg);

/* ---- stability pre-check ------------------------------------------------ */

typedef struct kt_stability_info {
  double nor;   /* max row bound; < 1 is required for the linear iteration */
  double s_opt; /* optimal relaxation 1/d */
  double d;     /* diagonal of the implicit operator */
  int worst_l1; /* velocity node attaining the bound */
  int worst_l2;
  double worst_a1, worst_b1, worst_a2, worst_b2;
} kt_stability_info;

KINTURB_API kt_status kt_check_stability(const kt_config* cfg,
                                         kt_stability_info* out);

/* ---- batch run ---------------------------------------------------------- */

typedef struct kt_step_info {
  int step;
  int total_steps;
  double t;
  int picard_iters;
  int linear_iters_total;
  double picard_delta;
  double linear_residual;
  double mass;
  double nor;
} kt_step_info;

typedef void (*kt_progress_fn)(const kt_step_info* info, void* user);

/* Runs the configured simulation and writes CSV snapshots, diagnostics, and
 * a MANIFEST into the configured output directory. progress may be NULL. */
KINTURB_API kt_status kt_run(const kt_config* cfg, kt_progress_fn progress,
                             void* user);

/* ---- stepwise simulation ------------------------------------------------ */

typedef struct kt_sim kt_sim;

typedef struct kt_field_shape {
  int m1, m2;           /* interior space nodes per dimension */
  int mr1, pr1, mr2, pr2; /* velocity index ranges [-mr, pr] */
} kt_field_shape;

KINTURB_API kt_status kt_sim_create(const kt_config* cfg, kt_sim** out);
KINTURB_API void kt_sim_free(kt_sim* sim);

/* Advances the simulation. last (optional) receives the final step's
 * statistics. Advancing beyond the configured step count fails. */
KINTURB_API kt_status kt_sim_advance(kt_sim* sim, int steps, kt_step_info* last);

KINTURB_API int kt_sim_step_index(const kt_sim* sim);
KINTURB_API double kt_sim_time(const kt_sim* sim);
KINTURB_API kt_status kt_sim_shape(const kt_sim* sim, kt_field_shape* out);

/* Copies the density field. len must equal
 * m1*m2*(mr1+pr1+1)*(mr2+pr2+1); the cell (k1, k2, l1, l2) lands at
 * ((l1+mr1)*(mr2+pr2+1) + (l2+mr2))*m1*m2 + k2*m1 + k1. */
KINTURB_API kt_status kt_sim_copy_density(const kt_sim* sim, double* buf,
                                          size_t len);

/* Copies Euler moment fields (each of length m1*m2, k2*m1 + k1 layout).
 * Any of rho/p1/p2 may be NULL to skip it. */
KINTURB_API kt_status kt_sim_copy_euler(const kt_sim* sim, double* rho, double* p1,
                                        double* p2, size_t len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KINTURB_H */
