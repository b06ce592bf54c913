/*
 * pnav: patience-modulated waypoint navigation simulator.
 *
 * C interface to the simulation core. All entry points return a pnav_status
 * (0 = success); on failure pnav_last_error() carries a message for the
 * calling thread. Handles are opaque and must be released with their _free
 * function.
 */
#ifndef PNAV_H
#define PNAV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PNAV_API __declspec(dllexport)
#else
#define PNAV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pnav_status {
    PNAV_OK = 0,
    PNAV_ERR_INVALID_ARGUMENT = 1,
    PNAV_ERR_IO = 2,
    PNAV_ERR_RUNTIME = 3
} pnav_status;

PNAV_API const char* pnav_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
PNAV_API const char* pnav_last_error(void);

/* ------------------------------------------------------------------ */
/* Experiment configuration                                            */

typedef struct pnav_config pnav_config;

/* Defaults: encinitas site, low condition, shortcut mode, 1 trial, seed 1. */
PNAV_API pnav_config* pnav_config_create(void);
PNAV_API pnav_config* pnav_config_load(const char* path);
PNAV_API pnav_config* pnav_config_parse(const char* text);
PNAV_API void pnav_config_free(pnav_config* cfg);

/* Set one entry by dotted key, e.g. ("experiment.trials", "6"). */
PNAV_API pnav_status pnav_config_set(pnav_config* cfg, const char* key,
                                     const char* value);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */

typedef struct pnav_experiment_summary {
    int trials;
    int total_skips;
    double mean_time_before_skip_s; /* NaN when no skips occurred */
    double mean_completion_time_s;
    double completion_rate;
    double mean_waypoints_reached;
    double mean_energy_j;
} pnav_experiment_summary;

/* Runs the configured trials and writes report.json, summary.csv and
 * trial_<i>.geojson into out_dir. summary may be NULL. */
PNAV_API pnav_status pnav_run_experiment(const pnav_config* cfg, const char* out_dir,
                                         pnav_experiment_summary* summary);

typedef struct pnav_mode_summary {
    double mean_time_s;
    double mean_energy_j;
    double mean_waypoints_reached;
    int total_skips;
} pnav_mode_summary;

typedef struct pnav_compare_summary {
    pnav_mode_summary shortcut;
    pnav_mode_summary road;
} pnav_compare_summary;

/* Paired shortcut-vs-road run on matched seeds. checkpoint_path selects the
 * trained follower; NULL selects the mask-centroid oracle. Writes
 * comparison.json into out_dir (pass NULL to skip the file). */
PNAV_API pnav_status pnav_compare_modes(const pnav_config* cfg,
                                        const char* checkpoint_path,
                                        const char* out_dir,
                                        pnav_compare_summary* summary);

/* curves.csv + curves.svg for the configured variant, t in [0, t_max]. */
PNAV_API pnav_status pnav_emit_patience_curves(const pnav_config* cfg, double t_max_s,
                                               double step_s, const char* out_dir);

/* Re-emit trial_<index>'s trajectory from a written report (validates the
 * report and round-trips the GeoJSON through the library's own reader). */
PNAV_API pnav_status pnav_export_trajectory(const char* report_path, int trial_index,
                                            const char* out_path);

/* ------------------------------------------------------------------ */
/* Road-following training                                             */

typedef struct pnav_train_summary {
    int episodes;
    double final10_mean_on_road; /* mean on-road fraction of the last 10 episodes */
} pnav_train_summary;

/* Online DQN training on the named track ("scurve", "straight"). Writes
 * learning_curve.csv and checkpoint.bin into out_dir. */
PNAV_API pnav_status pnav_train_road(const char* track, int episodes, uint64_t seed,
                                     const char* out_dir, pnav_train_summary* summary);

typedef struct pnav_eval_summary {
    double mean_on_road_fraction;
    double mean_episode_steps;
    double mean_reward;
} pnav_eval_summary;

/* Greedy evaluation of a checkpoint (or the oracle follower when
 * checkpoint_path is NULL) on the named track. */
PNAV_API pnav_status pnav_eval_road(const char* track, const char* checkpoint_path,
                                    int episodes, uint64_t seed,
                                    pnav_eval_summary* summary);

/* ------------------------------------------------------------------ */
/* Model evaluation helpers                                            */

typedef struct pnav_patience_params {
    double beta;    /* sigmoid gain, 50 in the reference setup */
    double mu_s;    /* reach-likelihood mean, seconds */
    double sigma_s; /* reach-likelihood std, seconds */
    double prior_q; /* prior reward probability */
    int literal;    /* 0 = figure-consistent variant, 1 = literal equation */
} pnav_patience_params;

PNAV_API void pnav_patience_defaults(pnav_patience_params* params);

PNAV_API pnav_status pnav_p_wait(double t_s, const pnav_patience_params* params,
                                 double* out);

PNAV_API pnav_status pnav_normal_cdf(double x, double* out);

/* Exact discrete skip-time statistics under checks every tick_s. */
PNAV_API pnav_status pnav_skip_time_stats(const pnav_patience_params* params,
                                          double tick_s, double horizon_s,
                                          double* mean_s, double* stddev_s,
                                          double* skip_probability);

PNAV_API pnav_status pnav_haversine_m(double lat1, double lon1, double lat2,
                                      double lon2, double* out);

PNAV_API pnav_status pnav_initial_bearing_deg(double lat1, double lon1, double lat2,
                                              double lon2, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PNAV_H */
