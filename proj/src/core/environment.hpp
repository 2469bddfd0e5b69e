// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "core/channel.hpp"
#include "core/curriculum.hpp"
#include "core/rng.hpp"
#include "core/sensing.hpp"

namespace beamguard::env {

inline constexpr std::size_t kObservationDim = 7;
inline constexpr std::size_t kActionCount = 5;

// Discrete action semantics.
enum Action : int {
    kBeamLeft = 0,    // beam azimuth -5 deg
    kBeamRight = 1,   // beam azimuth +5 deg
    kEffortUp = 2,    // sensing effort +0.25
    kEffortDown = 3,  // sensing effort -0.25
    kNoOp = 4,
};

/// Ground-truth geometry and controls for the current step.
struct ScenarioState {
    double user_range_m = 0.0;
    double user_azimuth_deg = 0.0;
    double attacker_range_m = 0.0;
    double attacker_azimuth_deg = 0.0;
    double beam_azimuth_deg = 0.0;
    double effort = 0.0;
    std::size_t step_index = 0;
};

/// Reward weights and indicator thresholds. All inequalities are strict.
struct RewardConfig {
    double w_det = 150.0;
    double w_pro = 25.0;
    double w_unaware = 5.0;
    double w_com = 0.5;
    double conf_threshold = 0.7;
    double near_threshold_m = 80.0;
    double effort_threshold = 0.8;
    double sinr_threshold_db = 5.0;

    void validate() const;
};

struct ScenarioBounds {
    double user_range_min_m = 30.0;
    double user_range_max_m = 120.0;
    double user_azimuth_abs_max_deg = 60.0;
    double attacker_range_min_m = 20.0;
    double attacker_range_max_m = 150.0;
    double attacker_offset_min_deg = 15.0;
    double attacker_offset_max_deg = 60.0;
};

struct EnvConfig {
    std::size_t episode_length = 50;
    double position_jitter_m = 0.5;   // per-step Gaussian sigma on ranges
    double azimuth_jitter_deg = 0.5;  // per-step Gaussian sigma on azimuths
    double initial_effort = 0.5;
    double beam_step_deg = 5.0;
    double effort_step = 0.25;
    ScenarioBounds bounds;

    // Min-max normalization constants for the state vector. SINR and range
    // slots are clamped into these windows before scaling; azimuths are
    // wrapped so they always fall inside theirs.
    double sinr_norm_min_db = -50.0;
    double sinr_norm_max_db = 60.0;
    double range_norm_min_m = 0.0;
    double range_norm_max_m = 200.0;

    void validate() const;
};

/// The 7 state-vector slots, in network input order.
enum ObservationSlot : std::size_t {
    kObsSinr = 0,
    kObsBeamAzimuth = 1,
    kObsEstAttackerAzimuth = 2,
    kObsEstAttackerRange = 3,
    kObsConfidence = 4,
    kObsTrueAttackerAzimuth = 5,
    kObsTrueAttackerRange = 6,
};

/// Normalized agent state. Every entry lies in [0, 1].
struct Observation {
    std::array<double, kObservationDim> values{};

    double operator[](std::size_t i) const { return values[i]; }
};

enum class StateMode {
    kTrain,  // ground-truth attacker location in slots 5-6
    kEval,   // slots 5-6 masked with the estimated values
};

/// Per-step diagnostics alongside the learning signal.
struct StepInfo {
    bool detection = false;
    bool overridden = false;
    double sinr_db = 0.0;
    double confidence = 0.0;
    double effort = 0.0;
    double true_attacker_range_m = 0.0;
    double true_attacker_azimuth_deg = 0.0;
    double beam_azimuth_deg = 0.0;
    double est_attacker_range_m = 0.0;
    double est_attacker_azimuth_deg = 0.0;
};

struct StepOutcome {
    Observation observation;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

double normalize_unit(double x, double min_value, double max_value);
double denormalize_unit(double u, double min_value, double max_value);

/// Eq.-style indicator reward on (confidence, true range, effort, SINR).
double compute_reward(double conf, double true_range_m, double effort, double sinr_db,
                      const RewardConfig& cfg);

/// Pure action application: beam stepped and wrapped, effort stepped and
/// clamped, step_index advanced. Throws DomainError on an invalid index.
ScenarioState apply_action(const ScenarioState& state, int action, const EnvConfig& cfg);

Observation assemble_state(const ScenarioState& state, const sensing::Measurement& measurement,
                           double conf, double sinr_db, StateMode mode, const EnvConfig& cfg);

/// Fraction of steps with the detection flag set. Throws on empty input.
double episode_detection_rate(const std::vector<StepOutcome>& outcomes);

/// One episodic simulation instance. Deterministic given (seed, episode
/// index): geometry comes from a scenario stream and measurement noise from
/// a sensor stream, both derived per episode, so trajectories replay exactly
/// and paired runs share geometry.
class Environment {
public:
    Environment(EnvConfig env_cfg, RewardConfig reward_cfg, sensing::SensingParams sensing_params,
                channel::ArrayConfig array_cfg, channel::LinkBudget budget, StateMode mode);

    Observation reset(std::uint64_t master_seed, std::uint64_t episode_index);

    /// Advances one step. A forced override replaces the agent's action with
    /// the curriculum payload and pins confidence to 1. Throws UsageError when
    /// the episode is already done.
    StepOutcome step(int action, const std::optional<curriculum::ForcedAction>& override_action = {});

    const ScenarioState& state() const { return state_; }
    bool done() const { return done_; }
    StateMode mode() const { return mode_; }
    void set_mode(StateMode mode) { mode_ = mode; }
    const EnvConfig& config() const { return env_cfg_; }
    const RewardConfig& reward_config() const { return reward_cfg_; }
    double noise_watts() const { return noise_watts_; }

private:
    double current_sinr_db() const;
    Observation observe(const sensing::Measurement& m, double conf, double sinr) const;

    EnvConfig env_cfg_;
    RewardConfig reward_cfg_;
    sensing::SensingParams sensing_params_;
    channel::ArrayConfig array_cfg_;
    channel::LinkBudget budget_;
    StateMode mode_;
    double noise_watts_ = 0.0;

    ScenarioState state_;
    bool started_ = false;
    bool done_ = true;
    Rng scenario_rng_;
    Rng sensor_rng_;
};

}  // namespace beamguard::env
