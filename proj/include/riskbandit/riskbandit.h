/* Copyright 2026 The riskbandit Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef RISKBANDIT_RISKBANDIT_H_
#define RISKBANDIT_RISKBANDIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(RB_BUILDING_LIBRARY)
#define RB_API __declspec(dllexport)
#else
#define RB_API __declspec(dllimport)
#endif
#else
#define RB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status. On failure a message describing the
 * error is available from rb_last_error() on the same thread until the next
 * call into the library. */
typedef enum rb_status {
  RB_OK = 0,
  RB_ERR_DOMAIN = 1,
  RB_ERR_CONFIG = 2,
  RB_ERR_PARSE = 3,
  RB_ERR_INTEGRITY = 4,
  RB_ERR_UNSUPPORTED = 5,
  RB_ERR_NUMERICAL = 6,
  RB_ERR_IO = 7,
  RB_ERR_INTERNAL = 8,
  RB_ERR_INVALID_ARGUMENT = 9,
  RB_ERR_DEGENERATE_RUN = 10
} rb_status;

typedef struct rb_environment rb_environment;
typedef struct rb_config rb_config;
typedef struct rb_trajectory rb_trajectory;

RB_API const char* rb_version(void);
RB_API const char* rb_status_string(rb_status status);
RB_API const char* rb_last_error(void);

/* Strings returned through char** out-parameters are owned by the caller. */
RB_API void rb_string_free(char* text);

/* ---- Risk measures --------------------------------------------------- */

RB_API rb_status rb_empirical_cvar(const double* samples, size_t count, double alpha,
                                   double* out);
RB_API rb_status rb_exact_cvar_discrete(const double* values, const double* probs, size_t count,
                                        double alpha, double* out);
RB_API rb_status rb_kusuoka_eval(const double* samples, size_t count, const double* mu,
                                 size_t levels, double* out);
RB_API rb_status rb_ci_sample_count(double horizon, double alpha, double gamma, double kappa,
                                    uint64_t* out);
RB_API rb_status rb_kusuoka_ci_sample_count(double horizon, size_t levels, double gamma,
                                            double kappa, uint64_t* out);

/* ---- Environments ---------------------------------------------------- */

/* Descriptor: {"family": ..., "set": {...}, parameters...}. */
RB_API rb_status rb_environment_from_json(const char* json, rb_environment** out);
RB_API void rb_environment_destroy(rb_environment* env);
RB_API size_t rb_environment_dim(const rb_environment* env);

/* Closed-form risk at x; risk_json is {"kind":"cvar","alpha":a} or
 * {"kind":"kusuoka","mu":[...]}. */
RB_API rb_status rb_environment_ground_truth(const rb_environment* env, const double* x,
                                             size_t dim, const char* risk_json, double* out);

/* ---- Experiment configuration --------------------------------------- */

/* Loading only checks that the document is a JSON object. Full validation
 * happens in rb_config_to_json and in every call that runs the config, so
 * setters may fill in missing fields first. */
RB_API rb_status rb_config_from_json(const char* json, rb_config** out);
RB_API rb_status rb_config_from_file(const char* path, rb_config** out);

/* A config with only the defaults; algorithm, environment, risk and
 * horizons must be set before it validates. */
RB_API rb_config* rb_config_new(void);
RB_API void rb_config_destroy(rb_config* cfg);

RB_API rb_status rb_config_set_algorithm(rb_config* cfg, const char* name);
RB_API rb_status rb_config_set_environment(rb_config* cfg, const char* json);
RB_API rb_status rb_config_set_alpha(rb_config* cfg, double alpha);
RB_API rb_status rb_config_set_horizons(rb_config* cfg, const uint64_t* horizons, size_t count);
RB_API rb_status rb_config_set_seed(rb_config* cfg, uint64_t master_seed);
RB_API rb_status rb_config_set_replications(rb_config* cfg, uint64_t replications);
RB_API rb_status rb_config_set_output_dir(rb_config* cfg, const char* dir);

/* Validates and writes the canonical config document. */
RB_API rb_status rb_config_to_json(const rb_config* cfg, char** out);

/* ---- Runs and trajectories ------------------------------------------ */

RB_API rb_status rb_run_single(const rb_config* cfg, uint64_t horizon, uint64_t replication,
                               rb_trajectory** out);
RB_API void rb_trajectory_destroy(rb_trajectory* traj);
RB_API size_t rb_trajectory_length(const rb_trajectory* traj);
RB_API size_t rb_trajectory_dim(const rb_trajectory* traj);

/* Copies row `index` (0-based): dim coordinates into `point`, then the loss. */
RB_API rb_status rb_trajectory_row(const rb_trajectory* traj, size_t index, double* point,
                                   size_t dim, double* loss);
RB_API rb_status rb_trajectory_write_csv(const rb_trajectory* traj, const char* path);
RB_API rb_status rb_trajectory_read_csv(const char* path, rb_trajectory** out);

/* ---- Experiments ----------------------------------------------------- */

/* Runs every (horizon, replication) pair on up to `jobs` threads (0 means
 * the RISKBANDIT_JOBS default) and returns the summary document. */
RB_API rb_status rb_experiment_run(const rb_config* cfg, size_t jobs, char** summary_json);

/* Recomputes metrics for trajectory files. `cfg` may be NULL; when given,
 * each file must match it. Returns a JSON array. */
RB_API rb_status rb_evaluate(const char* const* paths, size_t count, const rb_config* cfg,
                             char** metrics_json);

RB_API rb_status rb_summarize(const char* dir, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* RISKBANDIT_RISKBANDIT_H_ */
