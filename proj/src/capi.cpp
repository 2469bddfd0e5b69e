// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "beamguard.h"

#include <cstring>
#include <string>

#include "core/checkpoint.hpp"
#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/runner.hpp"

using namespace beamguard;

struct bg_config {
    config::ExperimentConfig cfg;
};

struct bg_env {
    env::Environment environment;
    std::uint64_t seed;
};

struct bg_agent {
    ppo::ActorCritic nets;
    Rng action_rng;
    std::uint64_t config_hash;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

/// Runs `fn`, translating exceptions into status codes + bg_last_error().
template <typename Fn>
bg_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const ConfigError& e) {
        set_error(e.what());
        return BG_ERROR_CONFIG;
    } catch (const IoError& e) {
        set_error(e.what());
        return BG_ERROR_RUNTIME;
    } catch (const UsageError& e) {
        set_error(e.what());
        return BG_ERROR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return BG_ERROR_RUNTIME;
    } catch (...) {
        set_error("unknown error");
        return BG_ERROR_RUNTIME;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bg_summary_stats to_c(const metrics::SummaryStats& s) {
    return bg_summary_stats{s.mean, s.stddev, s.median, s.min, s.max};
}

void fill_step_result(bg_step_result* out, const env::StepOutcome& step) {
    for (std::size_t i = 0; i < env::kObservationDim; ++i)
        out->observation[i] = step.observation.values[i];
    out->reward = step.reward;
    out->done = step.done ? 1 : 0;
    out->detection = step.info.detection ? 1 : 0;
    out->overridden = step.info.overridden ? 1 : 0;
    out->sinr_db = step.info.sinr_db;
    out->confidence = step.info.confidence;
    out->effort = step.info.effort;
    out->true_attacker_range_m = step.info.true_attacker_range_m;
    out->true_attacker_azimuth_deg = step.info.true_attacker_azimuth_deg;
    out->beam_azimuth_deg = step.info.beam_azimuth_deg;
}

bg_status invalid(const char* message) {
    set_error(message);
    return BG_ERROR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* bg_version(void) { return "0.1.0"; }

const char* bg_status_name(bg_status status) {
    switch (status) {
        case BG_OK: return "ok";
        case BG_ERROR_CONFIG: return "config error";
        case BG_ERROR_RUNTIME: return "runtime error";
        case BG_ERROR_COMPARE_ORDERING: return "compare ordering failed";
        case BG_ERROR_INVALID_ARGUMENT: return "invalid argument";
    }
    return "unknown";
}

const char* bg_last_error(void) { return g_last_error.c_str(); }

bg_status bg_config_create(const char* path, const char* profile, bg_config** out) {
    if (!out) return invalid("bg_config_create: out is null");
    *out = nullptr;
    return guarded([&] {
        auto handle = new bg_config{config::load_config(path ? path : "", profile ? profile : "")};
        *out = handle;
        return BG_OK;
    });
}

bg_status bg_config_set_seed(bg_config* cfg, uint64_t seed) {
    if (!cfg) return invalid("bg_config_set_seed: cfg is null");
    cfg->cfg.seed = seed;
    return BG_OK;
}

bg_status bg_config_set_workers(bg_config* cfg, uint32_t workers) {
    if (!cfg) return invalid("bg_config_set_workers: cfg is null");
    if (workers == 0) return invalid("bg_config_set_workers: workers must be positive");
    cfg->cfg.harness.workers = workers;
    return BG_OK;
}

uint64_t bg_config_hash(const bg_config* cfg) { return cfg ? cfg->cfg.hash() : 0; }

bg_status bg_config_to_json(const bg_config* cfg, char** out_json) {
    if (!cfg || !out_json) return invalid("bg_config_to_json: null argument");
    return guarded([&] {
        *out_json = dup_string(cfg->cfg.to_json().dump(2));
        return BG_OK;
    });
}

void bg_string_free(char* s) { delete[] s; }

void bg_config_destroy(bg_config* cfg) { delete cfg; }

bg_status bg_train(const bg_config* cfg, const char* out_dir, int write_trace,
                   bg_progress_fn progress, void* user, char** out_checkpoint_path) {
    if (!cfg || !out_dir) return invalid("bg_train: null argument");
    return guarded([&] {
        runner::TrainOptions options;
        options.out_dir = out_dir;
        options.write_trace = write_trace != 0;
        if (progress) {
            options.progress = [progress, user](std::size_t episode, std::size_t total,
                                                const std::string& phase, double reward) {
                progress(episode, total, phase.c_str(), reward, user);
            };
        }
        const runner::TrainResult result = runner::train(cfg->cfg, options);
        if (out_checkpoint_path) *out_checkpoint_path = dup_string(result.checkpoint_path);
        return BG_OK;
    });
}

bg_status bg_evaluate(const bg_config* cfg, const char* checkpoint_path, const char* out_dir,
                      int greedy, uint64_t episodes, int write_trace, bg_eval_summary* out) {
    if (!cfg || !out) return invalid("bg_evaluate: null argument");
    return guarded([&] {
        runner::EvalOptions options;
        options.out_dir = out_dir ? out_dir : "";
        options.write_trace = write_trace != 0;
        if (greedy >= 0) options.greedy = greedy != 0;
        if (episodes > 0) options.episodes = episodes;
        const runner::EvalSummary s =
            runner::evaluate(cfg->cfg, checkpoint_path ? checkpoint_path : "", options);
        out->sinr_db = to_c(s.sinr_db);
        out->detection_rate = to_c(s.detection_rate);
        out->reward = to_c(s.reward);
        out->episode_any_detection_rate = s.episode_any_detection_rate;
        out->mean_effort = s.mean_effort;
        out->effort_near_mean = s.effort_near_mean;
        out->effort_far_mean = s.effort_far_mean;
        out->near_steps = s.near_steps;
        out->far_steps = s.far_steps;
        out->episodes = s.episodes;
        out->config_hash_mismatch = s.config_hash_mismatch ? 1 : 0;
        return BG_OK;
    });
}

bg_status bg_run_baseline(const bg_config* cfg, uint64_t episodes, const char* csv_path,
                          bg_baseline_summary* out) {
    if (!cfg || !out) return invalid("bg_run_baseline: null argument");
    return guarded([&] {
        const std::size_t n = episodes ? episodes : cfg->cfg.harness.eval_episodes;
        const runner::BaselineResult result = runner::run_baseline(
            cfg->cfg, n, runner::kEvalScenarioOffset, csv_path ? csv_path : "");
        out->sinr_db = to_c(result.sinr_db);
        out->detection_rate = to_c(result.detection_rate);
        out->episode_any_detection_rate = result.episode_any_detection_rate;
        out->episodes = result.episodes.size();
        return BG_OK;
    });
}

bg_status bg_compare(const bg_config* cfg, const char* checkpoint_path, const char* out_dir,
                     bg_compare_report* out) {
    if (!cfg || !out) return invalid("bg_compare: null argument");
    return guarded([&] {
        const runner::CompareReport r = runner::compare(
            cfg->cfg, checkpoint_path ? checkpoint_path : "", out_dir ? out_dir : "");
        out->episodes = r.episodes;
        out->agent_detection_mean = r.agent_detection_mean;
        out->baseline_detection_mean = r.baseline_detection_mean;
        out->agent_sinr_mean = r.agent_sinr_mean;
        out->baseline_sinr_mean = r.baseline_sinr_mean;
        out->agent_episode_detection_rate = r.agent_episode_detection_rate;
        out->baseline_episode_detection_rate = r.baseline_episode_detection_rate;
        out->detection_ordering_confidence = r.detection_ordering_confidence;
        out->sinr_ordering_confidence = r.sinr_ordering_confidence;
        out->orderings_hold = r.orderings_hold ? 1 : 0;
        if (!r.orderings_hold) {
            set_error("compare: qualitative orderings not confirmed at 95% confidence");
            return BG_ERROR_COMPARE_ORDERING;
        }
        return BG_OK;
    });
}

bg_status bg_env_create(const bg_config* cfg, int eval_mode, bg_env** out) {
    if (!cfg || !out) return invalid("bg_env_create: null argument");
    *out = nullptr;
    return guarded([&] {
        const auto mode = eval_mode ? env::StateMode::kEval : env::StateMode::kTrain;
        *out = new bg_env{env::Environment(cfg->cfg.env, cfg->cfg.reward, cfg->cfg.sensing,
                                           cfg->cfg.array, cfg->cfg.budget, mode),
                          cfg->cfg.seed};
        return BG_OK;
    });
}

bg_status bg_env_reset(bg_env* environment, uint64_t episode_index,
                       double out_observation[BG_OBSERVATION_DIM]) {
    if (!environment || !out_observation) return invalid("bg_env_reset: null argument");
    return guarded([&] {
        const env::Observation obs = environment->environment.reset(environment->seed, episode_index);
        for (std::size_t i = 0; i < env::kObservationDim; ++i) out_observation[i] = obs.values[i];
        return BG_OK;
    });
}

bg_status bg_env_step(bg_env* environment, int action, bg_step_result* out) {
    if (!environment || !out) return invalid("bg_env_step: null argument");
    return guarded([&] {
        fill_step_result(out, environment->environment.step(action));
        return BG_OK;
    });
}

bg_status bg_env_step_forced(bg_env* environment, bg_step_result* out) {
    if (!environment || !out) return invalid("bg_env_step_forced: null argument");
    return guarded([&] {
        const auto forced = curriculum::forced_action(
            environment->environment.state().attacker_azimuth_deg);
        fill_step_result(out, environment->environment.step(env::kNoOp, forced));
        return BG_OK;
    });
}

void bg_env_destroy(bg_env* environment) { delete environment; }

bg_status bg_agent_create(const bg_config* cfg, bg_agent** out) {
    if (!cfg || !out) return invalid("bg_agent_create: null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new bg_agent{ppo::ActorCritic::create(cfg->cfg.ppo, cfg->cfg.seed),
                            make_rng(cfg->cfg.seed, RngStream::kPolicy, 1ULL << 40),
                            cfg->cfg.hash()};
        return BG_OK;
    });
}

bg_status bg_agent_load(const bg_config* cfg, const char* checkpoint_path, bg_agent** out,
                        int* hash_mismatch) {
    if (!cfg || !checkpoint_path || !out) return invalid("bg_agent_load: null argument");
    *out = nullptr;
    return guarded([&] {
        checkpoint::LoadedCheckpoint loaded = checkpoint::load(checkpoint_path);
        if (hash_mismatch) *hash_mismatch = loaded.config_hash != cfg->cfg.hash() ? 1 : 0;
        *out = new bg_agent{std::move(loaded.nets),
                            make_rng(cfg->cfg.seed, RngStream::kPolicy, 1ULL << 40),
                            loaded.config_hash};
        return BG_OK;
    });
}

bg_status bg_agent_policy(const bg_agent* agent, const double observation[BG_OBSERVATION_DIM],
                          double out_probs[BG_ACTION_COUNT]) {
    if (!agent || !observation || !out_probs) return invalid("bg_agent_policy: null argument");
    return guarded([&] {
        const std::vector<double> probs = agent->nets.policy(
            std::span<const double>(observation, env::kObservationDim));
        for (std::size_t i = 0; i < env::kActionCount; ++i) out_probs[i] = probs[i];
        return BG_OK;
    });
}

bg_status bg_agent_value(const bg_agent* agent, const double observation[BG_OBSERVATION_DIM],
                         double* out_value) {
    if (!agent || !observation || !out_value) return invalid("bg_agent_value: null argument");
    return guarded([&] {
        *out_value = agent->nets.value(std::span<const double>(observation, env::kObservationDim));
        return BG_OK;
    });
}

bg_status bg_agent_act(bg_agent* agent, const double observation[BG_OBSERVATION_DIM], int greedy,
                       int* out_action) {
    if (!agent || !observation || !out_action) return invalid("bg_agent_act: null argument");
    return guarded([&] {
        const std::vector<double> probs = agent->nets.policy(
            std::span<const double>(observation, env::kObservationDim));
        if (greedy) {
            *out_action = ppo::greedy_action(probs);
        } else {
            *out_action = ppo::sample_action(probs, agent->action_rng).first;
        }
        return BG_OK;
    });
}

bg_status bg_agent_save(const bg_agent* agent, const char* path, uint64_t episode) {
    if (!agent || !path) return invalid("bg_agent_save: null argument");
    return guarded([&] {
        checkpoint::save(path, agent->nets, agent->config_hash, episode);
        return BG_OK;
    });
}

void bg_agent_destroy(bg_agent* agent) { delete agent; }

}  // extern "C"
