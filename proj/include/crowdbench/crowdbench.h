/* SPDX-License-Identifier: Apache-2.0
 * Copyright (c) 2026 crowdbench authors
 *
 * C interface to the crowdbench library. Every fallible call returns a
 * cb_status; on failure cb_last_error() describes the problem for the
 * calling thread. Strings returned through char ** are owned by the caller
 * and released with cb_string_free().
 */

#ifndef CROWDBENCH_CROWDBENCH_H
#define CROWDBENCH_CROWDBENCH_H

#include <stddef.h>

#if defined(_WIN32)
#define CB_API __declspec(dllexport)
#else
#define CB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cb_status {
  CB_OK = 0,
  CB_ERR_INVALID_ARGUMENT = 1,
  CB_ERR_CONFIG = 2,
  CB_ERR_INSUFFICIENT_POINTS = 3,
  CB_ERR_INVALID_WEIGHTS = 4,
  CB_ERR_PLACEMENT_FAILURE = 5,
  CB_ERR_STEPPED_TERMINAL = 6,
  CB_ERR_POLICY_FAILURE = 7,
  CB_ERR_EMPTY_BATCH = 8,
  CB_ERR_IO = 9,
  CB_ERR_INTERNAL = 10
} cb_status;

CB_API const char *cb_version(void);
CB_API const char *cb_status_name(cb_status status);
/* Message of the last failed call on this thread; "" if none. */
CB_API const char *cb_last_error(void);
CB_API void cb_string_free(char *s);

/* ---- trajectory metric ---- */

typedef struct cb_trajectory cb_trajectory;

/* xy holds n_points interleaved (x, y) pairs. */
CB_API cb_status cb_trajectory_create(const double *xy, size_t n_points, double dt, cb_trajectory **out);
/* CSV with a t,x,y header and uniform time steps. */
CB_API cb_status cb_trajectory_load_csv(const char *path, cb_trajectory **out);
/* Robot path of episode `ep` from a JSONL trajectory log. */
CB_API cb_status cb_trajectory_load_log(const char *path, size_t ep, double dt, cb_trajectory **out);
CB_API void cb_trajectory_free(cb_trajectory *traj);
CB_API size_t cb_trajectory_size(const cb_trajectory *traj);

CB_API cb_status cb_curvature(const double p1[2], const double p2[2], const double p3[2], double *kappa);
CB_API cb_status cb_discontinuity_ratio(const cb_trajectory *traj, double tau, double *ratio);
/* {"windows":[{"kappa1","kappa2","delta","degenerate"}...],"cdr":r,"tau":t} */
CB_API cb_status cb_curvature_windows_json(const cb_trajectory *traj, double tau, char **json);
CB_API cb_status cb_smoothness_penalty(double delta_kappa, double lambda, double tau_c, double *penalty);

/* ---- scoring ---- */

typedef struct cb_metrics {
  double sr, cr, tr, at, dr, md, cdr;
} cb_metrics;

typedef struct cb_weights {
  double saf, suc, comf, traj, effic;
} cb_weights;

typedef struct cb_scoring_config {
  double tau_S, beta, gamma, lambda_comf, tau_md_min, t_star;
  cb_weights weights;
} cb_scoring_config;

typedef struct cb_scores {
  double f_saf, f_suc, f_comf, f_traj, f_effic;
  double f_comf_dn, f_comf_md;
  double comprehensive;
  int efficiency_undefined;
} cb_scores;

/* high_density != 0 selects the high-density safety threshold. */
CB_API void cb_scoring_defaults(int high_density, cb_scoring_config *out);
CB_API cb_status cb_score(const cb_metrics *metrics, const cb_scoring_config *cfg, cb_scores *out);
/* input: metrics or component scores as JSON or CSV text. scoring_json may be
 * NULL (defaults of `preset`, "low" or "high"). Outputs may be NULL. */
CB_API cb_status cb_score_text(const char *input, const char *scoring_json, const char *preset, char **json,
                               char **table);

/* ---- batch runs ---- */

typedef struct cb_run cb_run;

/* config_json is a run configuration document (NULL or "" for defaults). */
CB_API cb_status cb_run_create(const char *config_json, cb_run **out);
CB_API void cb_run_free(cb_run *run);
/* Effective configuration after defaults and presets are applied. */
CB_API cb_status cb_run_config_json(const cb_run *run, char **json);
/* workers == 0 uses all available hardware threads. */
CB_API cb_status cb_run_execute(cb_run *run, unsigned workers);
CB_API cb_status cb_run_excluded(const cb_run *run, size_t *excluded);
CB_API cb_status cb_run_summary(const cb_run *run, cb_metrics *seed_mean, cb_scores *scores);
/* format: "json", "csv" or "markdown". */
CB_API cb_status cb_run_emit_report(const cb_run *run, const char *format, char **text);
/* Requires a run configured with "record_steps": true. */
CB_API cb_status cb_run_write_log(const cb_run *run, const char *path);

/* ---- external policies and plots ---- */

/* Handshake plus three synthetic observations. transcript may be NULL. */
CB_API cb_status cb_protocol_check(const char *command, unsigned timeout_ms, char **transcript);
/* scenario_json may be NULL; it supplies the goal marker and radii. */
CB_API cb_status cb_plot_from_log(const char *log_path, size_t ep, const char *scenario_json, char **svg);

#ifdef __cplusplus
}
#endif

#endif /* CROWDBENCH_CROWDBENCH_H */
