/* SPDX-License-Identifier: Apache-2.0
 * Copyright (c) 2026 The beamguard authors
 *
 * C interface to the beamguard library: a desk-scale mmWave ISAC simulator
 * with a PPO agent that learns to steer a base-station beam and allocate
 * sensing effort against a beam-stealing attacker, plus a power-delay-profile
 * baseline detector for comparison.
 *
 * All entry points return bg_status; BG_OK is 0. On failure a thread-local
 * message is available via bg_last_error(). Handles are opaque and owned by
 * the caller until the matching *_destroy call.
 */

#ifndef BEAMGUARD_H
#define BEAMGUARD_H

#include <stdint.h>

#if defined(_WIN32)
#define BG_API __declspec(dllexport)
#else
#define BG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bg_status {
    BG_OK = 0,
    BG_ERROR_CONFIG = 1,           /* bad config file / invariant violation */
    BG_ERROR_RUNTIME = 2,          /* I/O or simulation failure             */
    BG_ERROR_COMPARE_ORDERING = 3, /* compare ran but orderings failed      */
    BG_ERROR_INVALID_ARGUMENT = 4  /* null handle / out-of-range argument   */
} bg_status;

typedef struct bg_config bg_config;
typedef struct bg_env bg_env;
typedef struct bg_agent bg_agent;

BG_API const char* bg_version(void);
BG_API const char* bg_status_name(bg_status status);

/* Message from the most recent failing call on this thread ("" if none). */
BG_API const char* bg_last_error(void);

/* ---- configuration ----------------------------------------------------- */

/* Loads a JSON config file on top of profile defaults. `path` may be NULL
 * (profile defaults only); `profile` may be NULL or "" (the file's own
 * profile key, default "paper"). Profiles: "paper", "desk". */
BG_API bg_status bg_config_create(const char* path, const char* profile, bg_config** out);

BG_API bg_status bg_config_set_seed(bg_config* cfg, uint64_t seed);
BG_API bg_status bg_config_set_workers(bg_config* cfg, uint32_t workers);
BG_API uint64_t bg_config_hash(const bg_config* cfg);

/* Canonical JSON dump of the resolved config; free with bg_string_free. */
BG_API bg_status bg_config_to_json(const bg_config* cfg, char** out_json);

BG_API void bg_string_free(char* s);
BG_API void bg_config_destroy(bg_config* cfg);

/* ---- training / evaluation / comparison -------------------------------- */

typedef void (*bg_progress_fn)(uint64_t episode, uint64_t total, const char* phase,
                               double episode_reward, void* user);

/* Runs the full curriculum training loop. Writes train_metrics.csv,
 * periodic checkpoints, and checkpoint_final.bgcp under out_dir. When
 * out_checkpoint_path is non-NULL it receives the final checkpoint path
 * (free with bg_string_free). */
BG_API bg_status bg_train(const bg_config* cfg, const char* out_dir, int write_trace,
                          bg_progress_fn progress, void* user, char** out_checkpoint_path);

typedef struct bg_summary_stats {
    double mean;
    double stddev;
    double median;
    double min;
    double max;
} bg_summary_stats;

typedef struct bg_eval_summary {
    bg_summary_stats sinr_db;        /* pooled over evaluation steps        */
    bg_summary_stats detection_rate; /* over per-episode step fractions     */
    bg_summary_stats reward;         /* over per-episode cumulative rewards */
    double episode_any_detection_rate;
    double mean_effort;
    double effort_near_mean; /* steps with attacker closer than 75 m  */
    double effort_far_mean;  /* steps with attacker at 75 m or beyond */
    uint64_t near_steps;
    uint64_t far_steps;
    uint64_t episodes;
    int config_hash_mismatch; /* checkpoint built under a different config */
} bg_eval_summary;

/* Evaluates a checkpoint (curriculum off, estimated-location state masking).
 * A NULL/empty checkpoint path evaluates a freshly initialized agent.
 * greedy: 1 = argmax policy, 0 = sampled, -1 = config default. episodes = 0
 * uses the config value. out_dir may be NULL (no CSV). */
BG_API bg_status bg_evaluate(const bg_config* cfg, const char* checkpoint_path,
                             const char* out_dir, int greedy, uint64_t episodes, int write_trace,
                             bg_eval_summary* out);

typedef struct bg_baseline_summary {
    bg_summary_stats sinr_db;
    bg_summary_stats detection_rate;
    double episode_any_detection_rate;
    uint64_t episodes;
} bg_baseline_summary;

/* Runs the SecBeam-style PDP detector on the shared scenario generator with
 * a fixed user-pointing beam. episodes = 0 uses the config value. csv_path
 * may be NULL. */
BG_API bg_status bg_run_baseline(const bg_config* cfg, uint64_t episodes, const char* csv_path,
                                 bg_baseline_summary* out);

typedef struct bg_compare_report {
    uint64_t episodes;
    double agent_detection_mean;
    double baseline_detection_mean;
    double agent_sinr_mean;
    double baseline_sinr_mean;
    double agent_episode_detection_rate;
    double baseline_episode_detection_rate;
    double detection_ordering_confidence; /* bootstrap P(agent > baseline)   */
    double sinr_ordering_confidence;      /* bootstrap P(baseline > agent)   */
    int orderings_hold;                   /* both confidences >= 0.95        */
} bg_compare_report;

/* Agent and baseline on identical scenario seeds; writes compare_pairs.csv
 * under out_dir when non-NULL. Returns BG_ERROR_COMPARE_ORDERING (report
 * still filled) when the qualitative orderings fail. */
BG_API bg_status bg_compare(const bg_config* cfg, const char* checkpoint_path,
                            const char* out_dir, bg_compare_report* out);

/* ---- stepping environments directly ------------------------------------ */

#define BG_OBSERVATION_DIM 7
#define BG_ACTION_COUNT 5

/* Actions: 0 beam -5 deg, 1 beam +5 deg, 2 effort +0.25, 3 effort -0.25,
 * 4 no-op (exact deltas per config). */

typedef struct bg_step_result {
    double observation[BG_OBSERVATION_DIM]; /* normalized state vector */
    double reward;
    int done;
    int detection;
    int overridden;
    double sinr_db;
    double confidence;
    double effort;
    double true_attacker_range_m;
    double true_attacker_azimuth_deg;
    double beam_azimuth_deg;
} bg_step_result;

/* eval_mode: 0 = training state (ground-truth attacker location visible),
 * 1 = evaluation masking. */
BG_API bg_status bg_env_create(const bg_config* cfg, int eval_mode, bg_env** out);

/* Starts episode `episode_index` of the config's seed; episodes replay
 * bit-identically for the same (seed, index). */
BG_API bg_status bg_env_reset(bg_env* env, uint64_t episode_index,
                              double out_observation[BG_OBSERVATION_DIM]);

BG_API bg_status bg_env_step(bg_env* env, int action, bg_step_result* out);

/* Applies the curriculum's forced-success override for this step: beam
 * snapped to the attacker's true azimuth, effort 1.0, detection forced. */
BG_API bg_status bg_env_step_forced(bg_env* env, bg_step_result* out);

BG_API void bg_env_destroy(bg_env* env);

/* ---- agents ------------------------------------------------------------ */

/* Freshly initialized actor-critic from the config's seed. */
BG_API bg_status bg_agent_create(const bg_config* cfg, bg_agent** out);

/* Loads a checkpoint. hash_mismatch (optional) is set to 1 when the
 * checkpoint was written under a different config hash. */
BG_API bg_status bg_agent_load(const bg_config* cfg, const char* checkpoint_path, bg_agent** out,
                               int* hash_mismatch);

BG_API bg_status bg_agent_policy(const bg_agent* agent,
                                 const double observation[BG_OBSERVATION_DIM],
                                 double out_probs[BG_ACTION_COUNT]);

BG_API bg_status bg_agent_value(const bg_agent* agent,
                                const double observation[BG_OBSERVATION_DIM], double* out_value);

/* greedy: 1 = argmax, 0 = sample from the policy (consumes the agent's
 * internal RNG stream). */
BG_API bg_status bg_agent_act(bg_agent* agent, const double observation[BG_OBSERVATION_DIM],
                              int greedy, int* out_action);

BG_API bg_status bg_agent_save(const bg_agent* agent, const char* path, uint64_t episode);

BG_API void bg_agent_destroy(bg_agent* agent);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BEAMGUARD_H */
