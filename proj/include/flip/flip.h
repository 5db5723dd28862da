/* flip - best linear one-step prediction for functional linear processes.
 *
 * C interface to the shared library. Handles are opaque; every call that can
 * fail returns a flip_status, and flip_last_error() describes the most
 * recent failure on the calling thread.
 */
#ifndef FLIP_H
#define FLIP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum flip_status {
  FLIP_OK = 0,
  FLIP_ERR_USAGE = 1,   /* bad arguments to an API call */
  FLIP_ERR_CONFIG = 2,  /* invalid config, model, or input file */
  FLIP_ERR_NUMERIC = 3  /* numerical failure (singular V block, non-PSD, ...) */
} flip_status;

typedef struct flip_config flip_config;
typedef struct flip_predictor flip_predictor;

const char* flip_version(void);

/* Message for the last failing call on this thread; empty string if none. */
const char* flip_last_error(void);

/* ---- experiment configs ------------------------------------------------ */

flip_status flip_config_open(const char* path, flip_config** out);
flip_status flip_config_parse(const char* json_text, flip_config** out);
flip_status flip_config_validate(const flip_config* config);
void flip_config_set_seed(flip_config* config, uint64_t seed);
void flip_config_close(flip_config* config);

/* ---- batch commands (the CLI is a thin shell over these) ---------------- */

/* Writes the trajectory CSV plus a .meta.json sidecar. NULL output paths
 * fall back to the config's run.output section, then to builtin names. */
flip_status flip_cmd_simulate(const flip_config* config, const char* out_csv);

flip_status flip_cmd_predict(const flip_config* config,
                             const char* trajectory_csv, const char* out_csv,
                             const char* dump_state_path /* nullable */);

/* format is "csv" or "table". */
flip_status flip_cmd_study(const flip_config* config, const char* out_dir,
                           const char* format);

flip_status flip_cmd_validate(const flip_config* config);

/* ---- array-level embedding interface ------------------------------------ */

/* Builds the one-step predictor of the configured model and algorithm.
 * Observations and predictions use the model's coordinates. */
flip_status flip_predictor_create(const flip_config* config, int n_max,
                                  flip_predictor** out);

/* Builds a fixed-dimension predictor straight from lag covariances:
 * covs holds (max_lag+1) row-major dim x dim matrices for lags 0..max_lag. */
flip_status flip_predictor_create_from_covs(int dim, int max_lag,
                                            const double* covs, int n_max,
                                            double pivot_tol,
                                            flip_predictor** out);

int flip_predictor_dim(const flip_predictor* predictor);

/* One-step prediction from n observed rows (row-major n x dim); writes the
 * prediction of observation n+1 into out[0..dim). n may be 0. */
flip_status flip_predictor_predict(const flip_predictor* predictor,
                                   const double* observations, int n,
                                   double* out);

/* Nuclear norm of the innovation covariance V_n, n in [0, n_max]. */
flip_status flip_predictor_error_nuclear(const flip_predictor* predictor,
                                         int n, double* out);

void flip_predictor_close(flip_predictor* predictor);

#ifdef __cplusplus
}
#endif

#endif /* FLIP_H */
