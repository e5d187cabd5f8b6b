/* fdsec: secure full-duplex resource allocation via SDP relaxation.
 *
 * Plain C interface over the C++ core. Objects are opaque handles owned by
 * the caller and released with the matching *_free function (NULL is
 * accepted). Every fallible call returns fdsec_status; on failure the
 * message is available from fdsec_last_error() on the same thread until the
 * next failing call there. */
#ifndef FDSEC_FDSEC_H
#define FDSEC_FDSEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(FDSEC_BUILDING_LIBRARY)
#define FDSEC_API __attribute__((visibility("default")))
#else
#define FDSEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FDSEC_OK = 0,
  FDSEC_ERR_INVALID_ARGUMENT = 1,
  FDSEC_ERR_SINGULAR = 2,
  FDSEC_ERR_NOT_CONVERGED = 3,
  FDSEC_ERR_NOT_PSD = 4,
  FDSEC_ERR_FACTORIZATION = 5,
  FDSEC_ERR_UNAVAILABLE = 6,
  FDSEC_ERR_PARSE = 7,
  FDSEC_ERR_IO = 8,
  FDSEC_ERR_BUFFER_TOO_SMALL = 9,
  FDSEC_ERR_INTERNAL = 10
} fdsec_status;

typedef enum {
  FDSEC_SCHEME_OPTIMAL = 0,
  FDSEC_SCHEME_BASELINE1 = 1,
  FDSEC_SCHEME_BASELINE2 = 2,
  FDSEC_SCHEME_HALF_DUPLEX = 3
} fdsec_scheme;

typedef enum {
  FDSEC_SOLVE_OPTIMAL = 0,
  FDSEC_SOLVE_PRIMAL_INFEASIBLE = 1,
  FDSEC_SOLVE_DUAL_INFEASIBLE = 2,
  FDSEC_SOLVE_MAX_ITERS = 3,
  FDSEC_SOLVE_NUMERICAL_FAILURE = 4
} fdsec_solve_status;

typedef enum { FDSEC_SWEEP_GAMMA_DL = 0, FDSEC_SWEEP_ANTENNAS = 1 } fdsec_sweep_param;

typedef enum { FDSEC_CERT_NA = -1, FDSEC_CERT_FAIL = 0, FDSEC_CERT_PASS = 1 } fdsec_certificate;

typedef struct fdsec_config fdsec_config;
typedef struct fdsec_trial fdsec_trial;
typedef struct fdsec_sweep fdsec_sweep;

FDSEC_API const char* fdsec_version(void);
FDSEC_API const char* fdsec_last_error(void);
FDSEC_API const char* fdsec_status_name(fdsec_status status);

/* ---- configuration ---------------------------------------------------- */

/* Defaults: N=8, K=6, J=3, M=5 and the standard link-budget constants. */
FDSEC_API fdsec_status fdsec_config_new(fdsec_config** out);
/* Flat "key = value" file; '#' comments; unknown keys are errors. */
FDSEC_API fdsec_status fdsec_config_load(const char* path, fdsec_config** out);
FDSEC_API fdsec_status fdsec_config_save(const fdsec_config* cfg, const char* path);
FDSEC_API fdsec_status fdsec_config_clone(const fdsec_config* cfg, fdsec_config** out);
FDSEC_API void fdsec_config_free(fdsec_config* cfg);
FDSEC_API fdsec_status fdsec_config_set(fdsec_config* cfg, const char* key, const char* value);
/* Copies the NUL-terminated value into buf. *needed (if non-NULL) receives
 * the required size including the terminator; FDSEC_ERR_BUFFER_TOO_SMALL
 * when cap is short. */
FDSEC_API fdsec_status fdsec_config_get(const fdsec_config* cfg, const char* key, char* buf, size_t cap,
                                        size_t* needed);
FDSEC_API fdsec_status fdsec_config_validate(const fdsec_config* cfg);
FDSEC_API size_t fdsec_config_key_count(void);
FDSEC_API const char* fdsec_config_key(size_t index);

FDSEC_API fdsec_status fdsec_scheme_parse(const char* name, fdsec_scheme* out);
FDSEC_API const char* fdsec_scheme_name(fdsec_scheme scheme);
FDSEC_API const char* fdsec_solve_status_name(fdsec_solve_status status);

/* ---- single trials ---------------------------------------------------- */

typedef struct {
  uint64_t seed;
  fdsec_scheme scheme;
  fdsec_solve_status status;
  int iterations;
  int solves;
  double solve_time_s;
  double rel_tol;            /* tolerance of the kept solve */
  int n_dl, n_ul;
  /* NaN unless status == FDSEC_SOLVE_OPTIMAL */
  double objective_w;
  double objective_dbm;
  double an_power_w;
  double worst_margin;
  double max_eig_ratio;
  double min_b_eig;
  double max_y_trace_ratio;
  double max_c1_tightness;
  int rank_one;
  fdsec_certificate certificate;
  int hd_precheck;
} fdsec_trial_info;

typedef enum {
  FDSEC_VALUES_DL_POWER = 0,  /* Tr W_k, W */
  FDSEC_VALUES_UL_POWER = 1,  /* P_j, W */
  FDSEC_VALUES_DL_SECRECY = 2,
  FDSEC_VALUES_UL_SECRECY = 3,
  FDSEC_VALUES_EIG_RATIO = 4
} fdsec_values;

FDSEC_API fdsec_status fdsec_trial_run(const fdsec_config* cfg, uint64_t seed, fdsec_scheme scheme,
                                       fdsec_trial** out);
FDSEC_API void fdsec_trial_free(fdsec_trial* trial);
FDSEC_API fdsec_status fdsec_trial_get_info(const fdsec_trial* trial, fdsec_trial_info* out);
/* Per-user values; *count receives the number available (0 when the solve
 * was not optimal). Copies min(cap, count) entries. */
FDSEC_API fdsec_status fdsec_trial_get_values(const fdsec_trial* trial, fdsec_values which, double* buf,
                                              size_t cap, size_t* count);
/* First failed certificate check, or the solver message; empty if none. */
FDSEC_API const char* fdsec_trial_message(const fdsec_trial* trial);
/* Writes trials.csv, sweep.csv, sweep.dat and summary.txt for the set. */
FDSEC_API fdsec_status fdsec_trials_write(const fdsec_trial* const* trials, size_t count, const char* dir);

/* ---- sweeps ----------------------------------------------------------- */

typedef struct {
  fdsec_sweep_param param;
  const double* values;
  size_t n_values;
  int trials;                   /* per value */
  const fdsec_scheme* schemes;
  size_t n_schemes;
  uint64_t base_seed;           /* seed of trial i is base_seed + i */
  int jobs;                     /* worker threads, >= 1 */
} fdsec_sweep_spec;

typedef void (*fdsec_progress_fn)(int done, int total, void* user);

typedef struct {
  double value;
  fdsec_scheme scheme;
  int trials;
  int feasible;
  int averaged;                 /* seeds feasible for every compared scheme */
  double power_dbm_mean;
  double power_dbm_std_error;
  double power_dbm_lower;
  double power_dbm_upper;
  double dl_secrecy_mean;
  double ul_secrecy_mean;
  double ul_secrecy_std_error;
  double dl_secrecy_total_mean; /* per-trial sum over users */
  double ul_secrecy_total_mean;
  double rank_one_rate;
  double certificate_rate;
  int no_feasible;
} fdsec_point_info;

FDSEC_API fdsec_status fdsec_sweep_run(const fdsec_config* base, const fdsec_sweep_spec* spec,
                                       fdsec_progress_fn progress, void* user, fdsec_sweep** out);
FDSEC_API void fdsec_sweep_free(fdsec_sweep* sweep);
FDSEC_API size_t fdsec_sweep_point_count(const fdsec_sweep* sweep);
FDSEC_API fdsec_status fdsec_sweep_get_point(const fdsec_sweep* sweep, size_t index, fdsec_point_info* out);
FDSEC_API fdsec_status fdsec_sweep_write(const fdsec_sweep* sweep, const char* dir);

/* Re-aggregates an existing trials.csv into sweep.csv, sweep.dat and
 * summary.txt under out_dir. */
FDSEC_API fdsec_status fdsec_summarize_file(const char* trials_csv, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif
