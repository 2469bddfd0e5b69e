// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/metrics.hpp"
#include "core/ppo.hpp"

namespace beamguard::runner {

// Scenario-index offsets keep training, evaluation, comparison, and
// determinism-check episodes on disjoint geometry streams for one seed.
inline constexpr std::uint64_t kEvalScenarioOffset = 1ULL << 32;
inline constexpr std::uint64_t kCompareScenarioOffset = 1ULL << 33;

using ProgressFn =
    std::function<void(std::size_t episode, std::size_t total, const std::string& phase,
                       double episode_reward)>;

struct TrainOptions {
    std::string out_dir = ".";
    bool write_trace = false;
    ProgressFn progress;  // optional, called after every episode
};

struct TrainResult {
    std::string checkpoint_path;
    std::string metrics_csv_path;
    std::size_t episodes = 0;
    std::size_t updates = 0;
};

/// Runs the full curriculum + PPO training loop: collects episodes (in
/// parallel when harness.workers > 1, merged in episode order), updates every
/// time the rollout buffer fills one batch, streams per-episode metrics to
/// CSV, and checkpoints on the configured cadence plus at the end.
/// A non-finite loss aborts with a diagnostic dump in out_dir.
TrainResult train(const config::ExperimentConfig& cfg, const TrainOptions& options);

struct EvalOptions {
    std::string out_dir;     // empty: no CSV written
    bool write_trace = false;
    std::optional<bool> greedy;            // overrides harness.greedy_eval
    std::optional<std::size_t> episodes;   // overrides harness.eval_episodes
};

struct EvalSummary {
    metrics::SummaryStats sinr_db;         // pooled over all evaluation steps
    metrics::SummaryStats detection_rate;  // over per-episode step fractions
    metrics::SummaryStats reward;          // over per-episode cumulative rewards
    double episode_any_detection_rate = 0.0;  // episodes with >= 1 detected step
    double mean_effort = 0.0;
    // Effort split by threat proximity (75 m), for the resource-allocation
    // analysis: a policy that probes near threats hard shows a gap here.
    double effort_near_mean = 0.0;
    double effort_far_mean = 0.0;
    std::size_t near_steps = 0;
    std::size_t far_steps = 0;
    std::size_t episodes = 0;
    bool config_hash_mismatch = false;
};

/// Evaluates a checkpoint with the curriculum off and eval-mode state
/// masking. An empty checkpoint path evaluates a freshly initialized
/// (untrained) agent, which is the random-policy floor.
EvalSummary evaluate(const config::ExperimentConfig& cfg, const std::string& checkpoint_path,
                     const EvalOptions& options);

struct BaselineResult {
    std::vector<metrics::EpisodeMetrics> episodes;
    metrics::SummaryStats sinr_db;         // pooled over steps
    metrics::SummaryStats detection_rate;  // over per-episode alarm fractions
    double episode_any_detection_rate = 0.0;
};

/// Runs the SecBeam-style PDP detector over the same scenario generator with
/// a fixed user-pointing beam (no-op actions, no curriculum).
BaselineResult run_baseline(const config::ExperimentConfig& cfg, std::size_t episodes,
                            std::uint64_t scenario_offset, const std::string& csv_path = "");

struct CompareReport {
    std::size_t episodes = 0;
    double agent_detection_mean = 0.0;
    double baseline_detection_mean = 0.0;
    double agent_sinr_mean = 0.0;
    double baseline_sinr_mean = 0.0;
    // Episode-level binary detection rates (any alarmed/detected step).
    double agent_episode_detection_rate = 0.0;
    double baseline_episode_detection_rate = 0.0;
    // Bootstrap P(mean ordering holds) over paired episodes.
    double detection_ordering_confidence = 0.0;  // agent > baseline
    double sinr_ordering_confidence = 0.0;       // baseline > agent
    bool orderings_hold = false;                 // both confidences >= 0.95
};

/// Agent vs baseline on identical scenario seeds. Writes the paired CSV when
/// out_dir is non-empty.
CompareReport compare(const config::ExperimentConfig& cfg, const std::string& checkpoint_path,
                      const std::string& out_dir);

}  // namespace beamguard::runner
