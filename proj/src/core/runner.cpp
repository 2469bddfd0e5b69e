// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "core/checkpoint.hpp"
#include "core/errors.hpp"

namespace beamguard::runner {

namespace {

namespace fs = std::filesystem;

constexpr double kSpeedOfLightMps = 299792458.0;
constexpr double kEffortSplitRangeM = 75.0;

const char* phase_label(curriculum::Phase phase) {
    switch (phase) {
        case curriculum::Phase::kPhase1: return "phase1";
        case curriculum::Phase::kPhase2: return "phase2";
        case curriculum::Phase::kOff: return "off";
    }
    return "off";
}

env::Environment make_environment(const config::ExperimentConfig& cfg, env::StateMode mode) {
    return env::Environment(cfg.env, cfg.reward, cfg.sensing, cfg.array, cfg.budget, mode);
}

struct StepRecord {
    env::Observation observation;  // state the action was chosen from
    int action = 0;
    double log_prob = 0.0;
    double value = 0.0;
    bool overridden = false;
    env::StepOutcome outcome;
};

struct EpisodeRollout {
    std::size_t episode_index = 0;
    curriculum::Phase phase = curriculum::Phase::kOff;
    std::vector<StepRecord> steps;
    metrics::EpisodeMetrics to_metrics() const;
};

metrics::EpisodeMetrics EpisodeRollout::to_metrics() const {
    metrics::EpisodeMetrics m;
    m.episode = episode_index;
    m.phase = phase_label(phase);
    double sinr_sum = 0.0, effort_sum = 0.0;
    std::size_t detections = 0;
    for (const auto& s : steps) {
        m.cumulative_reward += s.outcome.reward;
        sinr_sum += s.outcome.info.sinr_db;
        effort_sum += s.outcome.info.effort;
        if (s.outcome.info.detection) ++detections;
        if (s.overridden) ++m.override_count;
    }
    const double n = static_cast<double>(steps.size());
    m.detection_rate = detections / n;
    m.mean_sinr_db = sinr_sum / n;
    m.mean_effort = effort_sum / n;
    return m;
}

/// Rolls one full episode against a frozen parameter snapshot. The policy
/// action is sampled (and logged) even on override steps so the buffer always
/// carries a well-defined (action, log_prob) pair; the override flag decides
/// how the PPO loss treats it.
EpisodeRollout collect_episode(env::Environment& environment, const ppo::ActorCritic& nets,
                               const config::ExperimentConfig& cfg, std::size_t episode_index,
                               std::uint64_t scenario_index, bool greedy, bool curriculum_active) {
    EpisodeRollout rollout;
    rollout.episode_index = episode_index;

    curriculum::CurriculumConfig cur_cfg = cfg.curriculum;
    if (!curriculum_active) cur_cfg.enabled = false;
    rollout.phase = curriculum::phase_of(episode_index, cur_cfg);

    Rng curriculum_rng = make_rng(cfg.seed, RngStream::kCurriculum, scenario_index);
    const curriculum::OverridePlan plan =
        curriculum::plan_episode(rollout.phase, cfg.env.episode_length, cur_cfg, curriculum_rng);

    Rng policy_rng = make_rng(cfg.seed, RngStream::kPolicy, scenario_index);

    env::Observation obs = environment.reset(cfg.seed, scenario_index);
    rollout.steps.reserve(cfg.env.episode_length);

    for (std::size_t t = 0; t < cfg.env.episode_length; ++t) {
        StepRecord rec;
        rec.observation = obs;

        const std::vector<double> probs = nets.policy(obs.values);
        if (greedy) {
            rec.action = ppo::greedy_action(probs);
            rec.log_prob = std::log(std::max(probs[rec.action], 1e-300));
        } else {
            const auto [action, log_prob] = ppo::sample_action(probs, policy_rng);
            rec.action = action;
            rec.log_prob = log_prob;
        }
        rec.value = nets.value(obs.values);

        std::optional<curriculum::ForcedAction> forced;
        if (curriculum::should_override(rollout.phase, plan, t, cur_cfg, curriculum_rng)) {
            forced = curriculum::forced_action(environment.state().attacker_azimuth_deg);
            rec.overridden = true;
        }

        rec.outcome = environment.step(rec.action, forced);
        obs = rec.outcome.observation;
        rollout.steps.push_back(std::move(rec));
    }
    return rollout;
}

void append_to_buffer(ppo::RolloutBuffer& buffer, const EpisodeRollout& rollout,
                      double reward_scale) {
    for (const auto& s : rollout.steps) {
        buffer.push(s.observation, s.action, s.log_prob, s.outcome.reward / reward_scale, s.value,
                    s.outcome.done, s.overridden);
    }
}

/// Takes the first batch_size transitions out of `pending` and returns them
/// with the right bootstrap value for a mid-episode cut.
ppo::RolloutBuffer slice_batch(ppo::RolloutBuffer& pending, std::size_t batch_size) {
    ppo::RolloutBuffer batch;
    batch.observations.assign(pending.observations.begin(),
                              pending.observations.begin() + batch_size);
    batch.actions.assign(pending.actions.begin(), pending.actions.begin() + batch_size);
    batch.log_probs.assign(pending.log_probs.begin(), pending.log_probs.begin() + batch_size);
    batch.rewards.assign(pending.rewards.begin(), pending.rewards.begin() + batch_size);
    batch.values.assign(pending.values.begin(), pending.values.begin() + batch_size);
    batch.dones.assign(pending.dones.begin(), pending.dones.begin() + batch_size);
    batch.overrides.assign(pending.overrides.begin(), pending.overrides.begin() + batch_size);

    if (batch.dones.back()) {
        batch.bootstrap_value = 0.0;
    } else {
        // Episodes are appended whole, so a non-terminal cut always leaves
        // the episode's continuation (and its value estimate) behind.
        if (pending.size() == batch_size)
            throw DomainError("train: batch cut mid-episode with no continuation");
        batch.bootstrap_value = pending.values[batch_size];
    }

    auto erase_front = [batch_size](auto& v) { v.erase(v.begin(), v.begin() + batch_size); };
    erase_front(pending.observations);
    erase_front(pending.actions);
    erase_front(pending.log_probs);
    erase_front(pending.rewards);
    erase_front(pending.values);
    erase_front(pending.dones);
    erase_front(pending.overrides);
    return batch;
}

void dump_diagnostics(const std::string& out_dir, const config::ExperimentConfig& cfg,
                      std::size_t episode, std::size_t update_index,
                      const ppo::UpdateDiagnostics& diag) {
    nlohmann::json j;
    j["reason"] = "non-finite loss";
    j["episode"] = episode;
    j["update_index"] = update_index;
    j["actor_loss"] = diag.actor_loss;
    j["critic_loss"] = diag.critic_loss;
    j["entropy"] = diag.entropy;
    j["seed"] = cfg.seed;
    j["config_hash"] = cfg.hash();
    std::ofstream out(out_dir + "/diagnostics_dump.json");
    out << j.dump(2) << "\n";
}

double direct_delay_ns(double range_m) { return range_m / kSpeedOfLightMps * 1e9; }

}  // namespace

TrainResult train(const config::ExperimentConfig& cfg, const TrainOptions& options) {
    cfg.validate();
    fs::create_directories(options.out_dir);

    const std::uint64_t config_hash = cfg.hash();
    const std::string csv_path = options.out_dir + "/train_metrics.csv";
    metrics::CsvMetricsWriter csv(csv_path, config_hash, cfg.seed);

    std::optional<metrics::JsonlTraceWriter> trace;
    if (options.write_trace)
        trace.emplace(options.out_dir + "/train_trace.jsonl", config_hash, cfg.seed);

    ppo::PpoLearner learner(cfg.ppo, cfg.seed);
    ppo::RolloutBuffer pending;

    const std::size_t workers = std::max<std::size_t>(1, cfg.harness.workers);
    std::vector<env::Environment> environments;
    environments.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        environments.push_back(make_environment(cfg, env::StateMode::kTrain));

    TrainResult result;
    result.metrics_csv_path = csv_path;

    const std::size_t total = cfg.harness.total_episodes;
    std::size_t updates = 0;

    for (std::size_t round_start = 0; round_start < total; round_start += workers) {
        const std::size_t round_size = std::min(workers, total - round_start);
        std::vector<EpisodeRollout> rollouts(round_size);

        if (round_size == 1) {
            rollouts[0] = collect_episode(environments[0], learner.nets(), cfg, round_start,
                                          round_start, /*greedy=*/false, /*curriculum=*/true);
        } else {
            // Workers read a frozen parameter snapshot; updates happen only
            // after the round is merged, so thread timing cannot change the
            // result for a fixed worker count.
            std::vector<std::thread> pool;
            pool.reserve(round_size);
            for (std::size_t w = 0; w < round_size; ++w) {
                pool.emplace_back([&, w] {
                    rollouts[w] = collect_episode(environments[w], learner.nets(), cfg,
                                                  round_start + w, round_start + w,
                                                  /*greedy=*/false, /*curriculum=*/true);
                });
            }
            for (auto& t : pool) t.join();
        }

        for (const auto& rollout : rollouts) {
            append_to_buffer(pending, rollout, cfg.ppo.reward_scale);
            const metrics::EpisodeMetrics row = rollout.to_metrics();
            csv.append(row);
            if (trace) {
                for (std::size_t t = 0; t < rollout.steps.size(); ++t) {
                    const auto& s = rollout.steps[t];
                    trace->append(rollout.episode_index, t, s.action, s.overridden,
                                  s.outcome.info.sinr_db, s.outcome.info.confidence,
                                  s.outcome.reward, s.outcome.info.detection);
                }
            }
            if (options.progress)
                options.progress(rollout.episode_index, total, row.phase, row.cumulative_reward);

            while (pending.size() >= cfg.ppo.batch_size) {
                const ppo::RolloutBuffer batch = slice_batch(pending, cfg.ppo.batch_size);
                const ppo::UpdateDiagnostics diag = learner.update(batch);
                ++updates;
                if (!diag.finite) {
                    dump_diagnostics(options.out_dir, cfg, rollout.episode_index, updates, diag);
                    throw DomainError("train: non-finite loss at update " +
                                      std::to_string(updates) + " (diagnostics dumped)");
                }
            }

            const std::size_t done_episodes = rollout.episode_index + 1;
            if (done_episodes % cfg.harness.checkpoint_interval == 0 && done_episodes < total) {
                checkpoint::save(options.out_dir + "/checkpoint_ep" +
                                     std::to_string(done_episodes) + ".bgcp",
                                 learner.nets(), config_hash, done_episodes);
            }
        }
    }

    result.checkpoint_path = options.out_dir + "/checkpoint_final.bgcp";
    checkpoint::save(result.checkpoint_path, learner.nets(), config_hash, total);
    result.episodes = total;
    result.updates = updates;
    return result;
}

namespace {

struct EvalAccumulator {
    std::vector<double> step_sinr;
    std::vector<double> episode_detection;
    std::vector<double> episode_reward;
    std::size_t any_detection_episodes = 0;
    double effort_sum = 0.0;
    std::size_t step_count = 0;
    double near_effort_sum = 0.0, far_effort_sum = 0.0;
    std::size_t near_steps = 0, far_steps = 0;

    void add_episode(const EpisodeRollout& rollout) {
        bool any = false;
        for (const auto& s : rollout.steps) {
            step_sinr.push_back(s.outcome.info.sinr_db);
            effort_sum += s.outcome.info.effort;
            ++step_count;
            if (s.outcome.info.true_attacker_range_m < kEffortSplitRangeM) {
                near_effort_sum += s.outcome.info.effort;
                ++near_steps;
            } else {
                far_effort_sum += s.outcome.info.effort;
                ++far_steps;
            }
            any = any || s.outcome.info.detection;
        }
        const metrics::EpisodeMetrics m = rollout.to_metrics();
        episode_detection.push_back(m.detection_rate);
        episode_reward.push_back(m.cumulative_reward);
        if (any) ++any_detection_episodes;
    }
};

}  // namespace

EvalSummary evaluate(const config::ExperimentConfig& cfg, const std::string& checkpoint_path,
                     const EvalOptions& options) {
    cfg.validate();

    EvalSummary summary;
    ppo::ActorCritic nets;
    if (checkpoint_path.empty()) {
        nets = ppo::ActorCritic::create(cfg.ppo, cfg.seed);
    } else {
        checkpoint::LoadedCheckpoint loaded = checkpoint::load(checkpoint_path);
        summary.config_hash_mismatch = loaded.config_hash != cfg.hash();
        nets = std::move(loaded.nets);
    }

    const bool greedy = options.greedy.value_or(cfg.harness.greedy_eval);
    const std::size_t episodes = options.episodes.value_or(cfg.harness.eval_episodes);
    const std::uint64_t config_hash = cfg.hash();

    std::optional<metrics::CsvMetricsWriter> csv;
    std::optional<metrics::JsonlTraceWriter> trace;
    if (!options.out_dir.empty()) {
        fs::create_directories(options.out_dir);
        csv.emplace(options.out_dir + "/eval_metrics.csv", config_hash, cfg.seed);
        if (options.write_trace)
            trace.emplace(options.out_dir + "/eval_trace.jsonl", config_hash, cfg.seed);
    }

    env::Environment environment = make_environment(cfg, env::StateMode::kEval);
    EvalAccumulator acc;

    for (std::size_t e = 0; e < episodes; ++e) {
        EpisodeRollout rollout = collect_episode(environment, nets, cfg, e,
                                                 kEvalScenarioOffset + e, greedy,
                                                 /*curriculum=*/false);
        acc.add_episode(rollout);
        if (csv) {
            metrics::EpisodeMetrics row = rollout.to_metrics();
            row.phase = "eval";
            csv->append(row);
        }
        if (trace) {
            for (std::size_t t = 0; t < rollout.steps.size(); ++t) {
                const auto& s = rollout.steps[t];
                trace->append(e, t, s.action, s.overridden, s.outcome.info.sinr_db,
                              s.outcome.info.confidence, s.outcome.reward,
                              s.outcome.info.detection);
            }
        }
    }

    summary.sinr_db = metrics::SummaryStats::compute(acc.step_sinr);
    summary.detection_rate = metrics::SummaryStats::compute(acc.episode_detection);
    summary.reward = metrics::SummaryStats::compute(acc.episode_reward);
    summary.episode_any_detection_rate =
        static_cast<double>(acc.any_detection_episodes) / static_cast<double>(episodes);
    summary.mean_effort = acc.effort_sum / static_cast<double>(acc.step_count);
    summary.effort_near_mean =
        acc.near_steps ? acc.near_effort_sum / static_cast<double>(acc.near_steps) : 0.0;
    summary.effort_far_mean =
        acc.far_steps ? acc.far_effort_sum / static_cast<double>(acc.far_steps) : 0.0;
    summary.near_steps = acc.near_steps;
    summary.far_steps = acc.far_steps;
    summary.episodes = episodes;
    return summary;
}

BaselineResult run_baseline(const config::ExperimentConfig& cfg, std::size_t episodes,
                            std::uint64_t scenario_offset, const std::string& csv_path) {
    cfg.validate();
    if (episodes == 0) throw DomainError("run_baseline: episodes must be positive");

    const double noise_dbm = channel::noise_power_dbm(cfg.budget);

    std::optional<metrics::CsvMetricsWriter> csv;
    if (!csv_path.empty()) {
        fs::create_directories(fs::path(csv_path).parent_path().string().empty()
                                   ? "."
                                   : fs::path(csv_path).parent_path().string());
        csv.emplace(csv_path, cfg.hash(), cfg.seed);
    }

    env::Environment environment = make_environment(cfg, env::StateMode::kEval);
    BaselineResult result;
    std::vector<double> step_sinr;
    std::vector<double> episode_detection;
    std::size_t any_detection_episodes = 0;

    for (std::size_t e = 0; e < episodes; ++e) {
        const std::uint64_t scenario_index = scenario_offset + e;
        Rng baseline_rng = make_rng(cfg.seed, RngStream::kBaseline, scenario_index);
        std::bernoulli_distribution attack_coin(cfg.baseline.attack_probability);
        const bool attack_active = attack_coin(baseline_rng);

        environment.reset(cfg.seed, scenario_index);
        std::size_t alarms = 0;
        double sinr_sum = 0.0;
        bool any = false;

        for (std::size_t t = 0; t < cfg.env.episode_length; ++t) {
            // Fixed user-pointing beam: the baseline never steers away, so the
            // no-op action leaves the beam where reset() aimed it.
            const env::StepOutcome out = environment.step(env::kNoOp);
            const double rx_power_dbm = out.info.sinr_db + noise_dbm;
            const auto pdp = baseline::synth_pdp(
                direct_delay_ns(environment.state().user_range_m), rx_power_dbm, attack_active,
                cfg.baseline, baseline_rng);
            const bool alarm = baseline::secbeam_detect(pdp, cfg.baseline);
            if (alarm) ++alarms;
            any = any || alarm;
            sinr_sum += out.info.sinr_db;
            step_sinr.push_back(out.info.sinr_db);
        }

        metrics::EpisodeMetrics m;
        m.episode = e;
        m.phase = "baseline";
        m.cumulative_reward = 0.0;  // the detector earns no reward signal
        m.detection_rate = static_cast<double>(alarms) / static_cast<double>(cfg.env.episode_length);
        m.mean_sinr_db = sinr_sum / static_cast<double>(cfg.env.episode_length);
        m.mean_effort = 0.0;
        m.override_count = 0;
        episode_detection.push_back(m.detection_rate);
        if (any) ++any_detection_episodes;
        if (csv) csv->append(m);
        result.episodes.push_back(std::move(m));
    }

    result.sinr_db = metrics::SummaryStats::compute(step_sinr);
    result.detection_rate = metrics::SummaryStats::compute(episode_detection);
    result.episode_any_detection_rate =
        static_cast<double>(any_detection_episodes) / static_cast<double>(episodes);
    return result;
}

CompareReport compare(const config::ExperimentConfig& cfg, const std::string& checkpoint_path,
                      const std::string& out_dir) {
    cfg.validate();

    ppo::ActorCritic nets;
    if (checkpoint_path.empty()) {
        nets = ppo::ActorCritic::create(cfg.ppo, cfg.seed);
    } else {
        nets = checkpoint::load(checkpoint_path).nets;
    }

    const std::size_t episodes = cfg.harness.compare_episodes;
    const bool greedy = cfg.harness.greedy_eval;

    env::Environment agent_env = make_environment(cfg, env::StateMode::kEval);

    std::vector<double> agent_det, agent_sinr;
    std::vector<metrics::EpisodeMetrics> agent_rows;
    std::size_t agent_any = 0;
    for (std::size_t e = 0; e < episodes; ++e) {
        EpisodeRollout rollout = collect_episode(agent_env, nets, cfg, e,
                                                 kCompareScenarioOffset + e, greedy,
                                                 /*curriculum=*/false);
        metrics::EpisodeMetrics m = rollout.to_metrics();
        agent_det.push_back(m.detection_rate);
        agent_sinr.push_back(m.mean_sinr_db);
        if (m.detection_rate > 0.0) ++agent_any;
        agent_rows.push_back(std::move(m));
    }

    const BaselineResult base = run_baseline(cfg, episodes, kCompareScenarioOffset);

    std::vector<double> baseline_det, baseline_sinr;
    std::size_t baseline_any = 0;
    for (const auto& m : base.episodes) {
        baseline_det.push_back(m.detection_rate);
        baseline_sinr.push_back(m.mean_sinr_db);
        if (m.detection_rate > 0.0) ++baseline_any;
    }

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (const double x : v) s += x;
        return s / static_cast<double>(v.size());
    };

    CompareReport report;
    report.episodes = episodes;
    report.agent_detection_mean = mean_of(agent_det);
    report.baseline_detection_mean = mean_of(baseline_det);
    report.agent_sinr_mean = mean_of(agent_sinr);
    report.baseline_sinr_mean = mean_of(baseline_sinr);
    report.agent_episode_detection_rate =
        static_cast<double>(agent_any) / static_cast<double>(episodes);
    report.baseline_episode_detection_rate =
        static_cast<double>(baseline_any) / static_cast<double>(episodes);

    Rng det_rng = make_rng(cfg.seed, RngStream::kBootstrap, 0);
    Rng sinr_rng = make_rng(cfg.seed, RngStream::kBootstrap, 1);
    report.detection_ordering_confidence =
        metrics::bootstrap_superiority(agent_det, baseline_det, 10000, det_rng);
    report.sinr_ordering_confidence =
        metrics::bootstrap_superiority(baseline_sinr, agent_sinr, 10000, sinr_rng);
    report.orderings_hold = report.detection_ordering_confidence >= 0.95 &&
                            report.sinr_ordering_confidence >= 0.95;

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream out(out_dir + "/compare_pairs.csv");
        if (!out) throw IoError("compare: cannot write paired CSV");
        char hash_buf[32];
        std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                      static_cast<unsigned long long>(cfg.hash()));
        out << "# config_hash=" << hash_buf << " seed=" << cfg.seed << "\n";
        out << "episode,scenario_index,agent_reward,agent_detection_rate,agent_mean_sinr_db,"
               "baseline_detection_rate,baseline_mean_sinr_db\n";
        for (std::size_t e = 0; e < episodes; ++e) {
            out << e << ',' << (kCompareScenarioOffset + e) << ','
                << metrics::format_fixed(agent_rows[e].cumulative_reward) << ','
                << metrics::format_fixed(agent_rows[e].detection_rate) << ','
                << metrics::format_fixed(agent_rows[e].mean_sinr_db) << ','
                << metrics::format_fixed(base.episodes[e].detection_rate) << ','
                << metrics::format_fixed(base.episodes[e].mean_sinr_db) << "\n";
        }
    }
    return report;
}

}  // namespace beamguard::runner
