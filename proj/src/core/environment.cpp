// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/environment.hpp"

#include <algorithm>
#include <cmath>

#include "core/angles.hpp"
#include "core/errors.hpp"

namespace beamguard::env {

namespace {

double draw_uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng);
}

double draw_gaussian(Rng& rng, double sigma) {
    if (sigma <= 0.0) return 0.0;  // degenerate noise: no draw
    std::normal_distribution<double> dist(0.0, sigma);
    return dist(rng);
}

}  // namespace

void RewardConfig::validate() const {
    if (w_det < 0.0 || w_pro < 0.0 || w_unaware < 0.0 || w_com < 0.0)
        throw ConfigError("reward: weights must be non-negative");
}

void EnvConfig::validate() const {
    if (episode_length == 0) throw ConfigError("env: episode_length must be positive");
    if (bounds.user_range_min_m <= 0.0 || bounds.attacker_range_min_m <= 0.0)
        throw ConfigError("env: range bounds must be positive");
    if (bounds.user_range_min_m > bounds.user_range_max_m)
        throw ConfigError("env: user range bounds inverted");
    if (bounds.attacker_range_min_m > bounds.attacker_range_max_m)
        throw ConfigError("env: attacker range bounds inverted");
    if (bounds.attacker_offset_min_deg > bounds.attacker_offset_max_deg)
        throw ConfigError("env: attacker offset bounds inverted");
    if (effort_step <= 0.0 || beam_step_deg <= 0.0)
        throw ConfigError("env: action step sizes must be positive");
    if (initial_effort < 0.0 || initial_effort > 1.0)
        throw ConfigError("env: initial_effort must be in [0, 1]");
    if (sinr_norm_min_db >= sinr_norm_max_db || range_norm_min_m >= range_norm_max_m)
        throw ConfigError("env: normalization windows inverted");
}

double normalize_unit(double x, double min_value, double max_value) {
    const double u = (x - min_value) / (max_value - min_value);
    return std::clamp(u, 0.0, 1.0);
}

double denormalize_unit(double u, double min_value, double max_value) {
    return min_value + u * (max_value - min_value);
}

double compute_reward(double conf, double true_range_m, double effort, double sinr_db,
                      const RewardConfig& cfg) {
    const bool detected = conf > cfg.conf_threshold;
    const bool near = true_range_m < cfg.near_threshold_m;

    double reward = 0.0;
    if (detected) reward += cfg.w_det;
    if (near && effort > cfg.effort_threshold) reward += cfg.w_pro;
    if (near && conf < cfg.conf_threshold) reward -= cfg.w_unaware;
    if (sinr_db > cfg.sinr_threshold_db) reward += cfg.w_com;
    return reward;
}

ScenarioState apply_action(const ScenarioState& state, int action, const EnvConfig& cfg) {
    ScenarioState next = state;
    switch (action) {
        case kBeamLeft:
            next.beam_azimuth_deg = wrap_degrees(state.beam_azimuth_deg - cfg.beam_step_deg);
            break;
        case kBeamRight:
            next.beam_azimuth_deg = wrap_degrees(state.beam_azimuth_deg + cfg.beam_step_deg);
            break;
        case kEffortUp:
            next.effort = std::clamp(state.effort + cfg.effort_step, 0.0, 1.0);
            break;
        case kEffortDown:
            next.effort = std::clamp(state.effort - cfg.effort_step, 0.0, 1.0);
            break;
        case kNoOp:
            break;
        default:
            throw DomainError("apply_action: invalid action index");
    }
    next.step_index = state.step_index + 1;
    return next;
}

Observation assemble_state(const ScenarioState& state, const sensing::Measurement& measurement,
                           double conf, double sinr_db, StateMode mode, const EnvConfig& cfg) {
    Observation obs;
    obs.values[kObsSinr] = normalize_unit(sinr_db, cfg.sinr_norm_min_db, cfg.sinr_norm_max_db);
    obs.values[kObsBeamAzimuth] = normalize_unit(wrap_degrees(state.beam_azimuth_deg), -180.0, 180.0);
    obs.values[kObsEstAttackerAzimuth] =
        normalize_unit(measurement.est_azimuth_deg, -180.0, 180.0);
    obs.values[kObsEstAttackerRange] =
        normalize_unit(measurement.est_range_m, cfg.range_norm_min_m, cfg.range_norm_max_m);
    obs.values[kObsConfidence] = std::clamp(conf, 0.0, 1.0);
    if (mode == StateMode::kTrain) {
        obs.values[kObsTrueAttackerAzimuth] =
            normalize_unit(wrap_degrees(state.attacker_azimuth_deg), -180.0, 180.0);
        obs.values[kObsTrueAttackerRange] =
            normalize_unit(state.attacker_range_m, cfg.range_norm_min_m, cfg.range_norm_max_m);
    } else {
        // Ground truth is a training-only signal; outside training the
        // estimated fix fills those slots so the input layout stays fixed.
        obs.values[kObsTrueAttackerAzimuth] = obs.values[kObsEstAttackerAzimuth];
        obs.values[kObsTrueAttackerRange] = obs.values[kObsEstAttackerRange];
    }
    return obs;
}

double episode_detection_rate(const std::vector<StepOutcome>& outcomes) {
    if (outcomes.empty()) throw DomainError("episode_detection_rate: empty episode");
    std::size_t detected = 0;
    for (const auto& o : outcomes)
        if (o.info.detection) ++detected;
    return static_cast<double>(detected) / static_cast<double>(outcomes.size());
}

Environment::Environment(EnvConfig env_cfg, RewardConfig reward_cfg,
                         sensing::SensingParams sensing_params, channel::ArrayConfig array_cfg,
                         channel::LinkBudget budget, StateMode mode)
    : env_cfg_(env_cfg),
      reward_cfg_(reward_cfg),
      sensing_params_(sensing_params),
      array_cfg_(array_cfg),
      budget_(budget),
      mode_(mode) {
    env_cfg_.validate();
    reward_cfg_.validate();
    sensing_params_.validate();
    array_cfg_.validate();
    budget_.validate();
    noise_watts_ = channel::noise_power_watts(budget_);
}

Observation Environment::reset(std::uint64_t master_seed, std::uint64_t episode_index) {
    scenario_rng_ = make_rng(master_seed, RngStream::kScenario, episode_index);
    sensor_rng_ = make_rng(master_seed, RngStream::kSensor, episode_index);

    const auto& b = env_cfg_.bounds;
    // Draw order is part of the determinism contract: user range, user
    // azimuth, attacker range, offset magnitude, offset sign.
    state_ = ScenarioState{};
    state_.user_range_m = draw_uniform(scenario_rng_, b.user_range_min_m, b.user_range_max_m);
    state_.user_azimuth_deg =
        draw_uniform(scenario_rng_, -b.user_azimuth_abs_max_deg, b.user_azimuth_abs_max_deg);
    state_.attacker_range_m =
        draw_uniform(scenario_rng_, b.attacker_range_min_m, b.attacker_range_max_m);
    const double offset =
        draw_uniform(scenario_rng_, b.attacker_offset_min_deg, b.attacker_offset_max_deg);
    std::uniform_int_distribution<int> sign_dist(0, 1);
    const double sign = sign_dist(scenario_rng_) == 0 ? -1.0 : 1.0;
    state_.attacker_azimuth_deg = wrap_degrees(state_.user_azimuth_deg + sign * offset);
    state_.beam_azimuth_deg = state_.user_azimuth_deg;
    state_.effort = env_cfg_.initial_effort;
    state_.step_index = 0;

    started_ = true;
    done_ = false;

    const auto measurement =
        sensing::measure(state_.attacker_range_m, state_.attacker_azimuth_deg, sensing_params_,
                         sensor_rng_);
    const double conf = sensing::confidence(state_.effort, state_.attacker_range_m,
                                            state_.beam_azimuth_deg, state_.attacker_azimuth_deg,
                                            sensing_params_);
    return observe(measurement, conf, current_sinr_db());
}

StepOutcome Environment::step(int action, const std::optional<curriculum::ForcedAction>& override_action) {
    if (!started_) throw UsageError("step: reset() must be called first");
    if (done_) throw UsageError("step: episode is done");

    const bool forced = override_action.has_value();
    if (forced) {
        state_.beam_azimuth_deg = wrap_degrees(override_action->beam_azimuth_deg);
        state_.effort = std::clamp(override_action->effort, 0.0, 1.0);
        state_.step_index += 1;
    } else {
        state_ = apply_action(state_, action, env_cfg_);
    }

    // Mobility jitter, fixed draw order: user range/azimuth, attacker
    // range/azimuth. Ranges stay >= 1 m so the link model remains valid.
    state_.user_range_m =
        std::max(1.0, state_.user_range_m + draw_gaussian(scenario_rng_, env_cfg_.position_jitter_m));
    state_.user_azimuth_deg = wrap_degrees(
        state_.user_azimuth_deg + draw_gaussian(scenario_rng_, env_cfg_.azimuth_jitter_deg));
    state_.attacker_range_m = std::max(
        1.0, state_.attacker_range_m + draw_gaussian(scenario_rng_, env_cfg_.position_jitter_m));
    state_.attacker_azimuth_deg = wrap_degrees(
        state_.attacker_azimuth_deg + draw_gaussian(scenario_rng_, env_cfg_.azimuth_jitter_deg));

    const double sinr = current_sinr_db();
    const auto measurement = sensing::measure(state_.attacker_range_m, state_.attacker_azimuth_deg,
                                              sensing_params_, sensor_rng_);
    const double conf = forced && override_action->force_detection
                            ? 1.0
                            : sensing::confidence(state_.effort, state_.attacker_range_m,
                                                  state_.beam_azimuth_deg,
                                                  state_.attacker_azimuth_deg, sensing_params_);

    StepOutcome out;
    out.reward = compute_reward(conf, state_.attacker_range_m, state_.effort, sinr, reward_cfg_);
    out.info.detection = conf > reward_cfg_.conf_threshold;
    out.info.overridden = forced;
    out.info.sinr_db = sinr;
    out.info.confidence = conf;
    out.info.effort = state_.effort;
    out.info.true_attacker_range_m = state_.attacker_range_m;
    out.info.true_attacker_azimuth_deg = state_.attacker_azimuth_deg;
    out.info.beam_azimuth_deg = state_.beam_azimuth_deg;
    out.info.est_attacker_range_m = measurement.est_range_m;
    out.info.est_attacker_azimuth_deg = measurement.est_azimuth_deg;

    done_ = state_.step_index >= env_cfg_.episode_length;
    out.done = done_;
    out.observation = observe(measurement, conf, sinr);
    return out;
}

double Environment::current_sinr_db() const {
    const auto h = channel::channel_vector(state_.user_range_m, state_.user_azimuth_deg, 0.0,
                                           array_cfg_, budget_);
    const auto w = channel::beam_weights(state_.beam_azimuth_deg, array_cfg_);
    return channel::sinr_db(h, w, noise_watts_);
}

Observation Environment::observe(const sensing::Measurement& m, double conf, double sinr) const {
    return assemble_state(state_, m, conf, sinr, mode_, env_cfg_);
}

}  // namespace beamguard::env
