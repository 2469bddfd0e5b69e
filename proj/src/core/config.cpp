// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/config.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

#include "core/errors.hpp"

namespace beamguard::config {

using nlohmann::json;

void HarnessConfig::validate() const {
    if (total_episodes == 0) throw ConfigError("harness: total_episodes must be positive");
    if (eval_episodes == 0) throw ConfigError("harness: eval_episodes must be positive");
    if (compare_episodes == 0) throw ConfigError("harness: compare_episodes must be positive");
    if (workers == 0) throw ConfigError("harness: workers must be positive");
    if (checkpoint_interval == 0) throw ConfigError("harness: checkpoint_interval must be positive");
}

void ExperimentConfig::validate() const {
    if (profile != "paper" && profile != "desk")
        throw ConfigError("profile: unknown profile '" + profile + "' (expected paper or desk)");
    array.validate();
    budget.validate();
    sensing.validate();
    reward.validate();
    env.validate();
    ppo.validate();
    curriculum.validate(env.episode_length);
    baseline.validate();
    harness.validate();
    if (ppo.batch_size < env.episode_length)
        throw ConfigError("ppo.batch_size: must be at least env.episode_length");
}

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        prev.swap(cur);
    }
    return prev[b.size()];
}

/// Rejects keys outside `known`, suggesting the nearest known key.
void check_keys(const json& obj, const std::string& section,
                const std::vector<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) != known.end()) continue;
        std::string best;
        std::size_t best_dist = std::string::npos;
        for (const auto& candidate : known) {
            const std::size_t d = edit_distance(key, candidate);
            if (d < best_dist) {
                best_dist = d;
                best = candidate;
            }
        }
        std::string message = "config: unknown key '" + section + key + "'";
        if (!best.empty() && best_dist <= std::max<std::size_t>(3, key.size() / 2))
            message += " (did you mean '" + section + best + "'?)";
        throw ConfigError(message);
    }
}

template <typename T>
void get_to(const json& obj, const char* key, T& out, const std::string& section) {
    if (!obj.contains(key)) return;
    try {
        obj.at(key).get_to(out);
    } catch (const json::exception& e) {
        throw ConfigError("config: bad value for '" + section + key + "': " + e.what());
    }
}

void apply_array(const json& j, channel::ArrayConfig& c) {
    check_keys(j, "array.", {"rows", "cols", "element_spacing", "carrier_frequency_hz"});
    get_to(j, "rows", c.rows, "array.");
    get_to(j, "cols", c.cols, "array.");
    get_to(j, "element_spacing", c.element_spacing, "array.");
    get_to(j, "carrier_frequency_hz", c.carrier_frequency_hz, "array.");
}

void apply_budget(const json& j, channel::LinkBudget& c) {
    check_keys(j, "budget.", {"tx_power_dbm", "noise_psd_dbm_hz", "bandwidth_hz"});
    get_to(j, "tx_power_dbm", c.tx_power_dbm, "budget.");
    get_to(j, "noise_psd_dbm_hz", c.noise_psd_dbm_hz, "budget.");
    get_to(j, "bandwidth_hz", c.bandwidth_hz, "budget.");
}

void apply_sensing(const json& j, sensing::SensingParams& c) {
    check_keys(j, "sensing.",
               {"alpha", "beta", "model_variant", "alignment_sigma_deg", "range_noise_m",
                "azimuth_noise_deg"});
    get_to(j, "alpha", c.alpha, "sensing.");
    get_to(j, "beta", c.beta, "sensing.");
    get_to(j, "alignment_sigma_deg", c.alignment_sigma_deg, "sensing.");
    get_to(j, "range_noise_m", c.range_noise_m, "sensing.");
    get_to(j, "azimuth_noise_deg", c.azimuth_noise_deg, "sensing.");
    if (j.contains("model_variant")) {
        const std::string v = j.at("model_variant").get<std::string>();
        if (v == "paper")
            c.model = sensing::DetectionModel::kPaper;
        else if (v == "attenuated")
            c.model = sensing::DetectionModel::kAttenuated;
        else
            throw ConfigError("config: sensing.model_variant must be 'paper' or 'attenuated'");
    }
}

void apply_reward(const json& j, env::RewardConfig& c) {
    check_keys(j, "reward.",
               {"w_det", "w_pro", "w_unaware", "w_com", "conf_threshold", "near_threshold_m",
                "effort_threshold", "sinr_threshold_db"});
    get_to(j, "w_det", c.w_det, "reward.");
    get_to(j, "w_pro", c.w_pro, "reward.");
    get_to(j, "w_unaware", c.w_unaware, "reward.");
    get_to(j, "w_com", c.w_com, "reward.");
    get_to(j, "conf_threshold", c.conf_threshold, "reward.");
    get_to(j, "near_threshold_m", c.near_threshold_m, "reward.");
    get_to(j, "effort_threshold", c.effort_threshold, "reward.");
    get_to(j, "sinr_threshold_db", c.sinr_threshold_db, "reward.");
}

void apply_env(const json& j, env::EnvConfig& c) {
    check_keys(j, "env.",
               {"episode_length", "position_jitter_m", "azimuth_jitter_deg", "initial_effort",
                "beam_step_deg", "effort_step", "user_range_min_m", "user_range_max_m",
                "user_azimuth_abs_max_deg", "attacker_range_min_m", "attacker_range_max_m",
                "attacker_offset_min_deg", "attacker_offset_max_deg", "sinr_norm_min_db",
                "sinr_norm_max_db", "range_norm_min_m", "range_norm_max_m"});
    get_to(j, "episode_length", c.episode_length, "env.");
    get_to(j, "position_jitter_m", c.position_jitter_m, "env.");
    get_to(j, "azimuth_jitter_deg", c.azimuth_jitter_deg, "env.");
    get_to(j, "initial_effort", c.initial_effort, "env.");
    get_to(j, "beam_step_deg", c.beam_step_deg, "env.");
    get_to(j, "effort_step", c.effort_step, "env.");
    get_to(j, "user_range_min_m", c.bounds.user_range_min_m, "env.");
    get_to(j, "user_range_max_m", c.bounds.user_range_max_m, "env.");
    get_to(j, "user_azimuth_abs_max_deg", c.bounds.user_azimuth_abs_max_deg, "env.");
    get_to(j, "attacker_range_min_m", c.bounds.attacker_range_min_m, "env.");
    get_to(j, "attacker_range_max_m", c.bounds.attacker_range_max_m, "env.");
    get_to(j, "attacker_offset_min_deg", c.bounds.attacker_offset_min_deg, "env.");
    get_to(j, "attacker_offset_max_deg", c.bounds.attacker_offset_max_deg, "env.");
    get_to(j, "sinr_norm_min_db", c.sinr_norm_min_db, "env.");
    get_to(j, "sinr_norm_max_db", c.sinr_norm_max_db, "env.");
    get_to(j, "range_norm_min_m", c.range_norm_min_m, "env.");
    get_to(j, "range_norm_max_m", c.range_norm_max_m, "env.");
}

void apply_ppo(const json& j, ppo::PpoConfig& c) {
    check_keys(j, "ppo.",
               {"actor_lr", "critic_lr", "gamma", "gae_lambda", "clip_epsilon", "epochs",
                "batch_size", "minibatch_size", "entropy_coef", "adam_beta1", "adam_beta2",
                "adam_epsilon", "grad_clip_norm", "reward_scale", "normalize_advantages",
                "override_handling", "hidden_sizes"});
    get_to(j, "actor_lr", c.actor_lr, "ppo.");
    get_to(j, "critic_lr", c.critic_lr, "ppo.");
    get_to(j, "gamma", c.gamma, "ppo.");
    get_to(j, "gae_lambda", c.gae_lambda, "ppo.");
    get_to(j, "clip_epsilon", c.clip_epsilon, "ppo.");
    get_to(j, "epochs", c.epochs, "ppo.");
    get_to(j, "batch_size", c.batch_size, "ppo.");
    get_to(j, "minibatch_size", c.minibatch_size, "ppo.");
    get_to(j, "entropy_coef", c.entropy_coef, "ppo.");
    get_to(j, "adam_beta1", c.adam_beta1, "ppo.");
    get_to(j, "adam_beta2", c.adam_beta2, "ppo.");
    get_to(j, "adam_epsilon", c.adam_epsilon, "ppo.");
    get_to(j, "grad_clip_norm", c.grad_clip_norm, "ppo.");
    get_to(j, "reward_scale", c.reward_scale, "ppo.");
    get_to(j, "normalize_advantages", c.normalize_advantages, "ppo.");
    get_to(j, "hidden_sizes", c.hidden_sizes, "ppo.");
    if (j.contains("override_handling")) {
        const std::string v = j.at("override_handling").get<std::string>();
        if (v == "exclude")
            c.override_handling = ppo::OverrideHandling::kExclude;
        else if (v == "on_policy")
            c.override_handling = ppo::OverrideHandling::kTreatAsOnPolicy;
        else
            throw ConfigError("config: ppo.override_handling must be 'exclude' or 'on_policy'");
    }
}

void apply_curriculum(const json& j, curriculum::CurriculumConfig& c) {
    check_keys(j, "curriculum.",
               {"enabled", "phase1_episodes", "forced_steps_per_episode", "phase2_override_prob"});
    get_to(j, "enabled", c.enabled, "curriculum.");
    get_to(j, "phase1_episodes", c.phase1_episodes, "curriculum.");
    get_to(j, "forced_steps_per_episode", c.forced_steps_per_episode, "curriculum.");
    get_to(j, "phase2_override_prob", c.phase2_override_prob, "curriculum.");
}

void apply_baseline(const json& j, baseline::BaselineConfig& c) {
    check_keys(j, "baseline.",
               {"relay_delay_excess_ns", "relay_gain_db", "alarm_margin_db", "power_jitter_db",
                "attack_probability"});
    get_to(j, "relay_delay_excess_ns", c.relay_delay_excess_ns, "baseline.");
    get_to(j, "relay_gain_db", c.relay_gain_db, "baseline.");
    get_to(j, "alarm_margin_db", c.alarm_margin_db, "baseline.");
    get_to(j, "power_jitter_db", c.power_jitter_db, "baseline.");
    get_to(j, "attack_probability", c.attack_probability, "baseline.");
}

void apply_harness(const json& j, HarnessConfig& c) {
    check_keys(j, "harness.",
               {"total_episodes", "eval_episodes", "compare_episodes", "workers",
                "checkpoint_interval", "greedy_eval"});
    get_to(j, "total_episodes", c.total_episodes, "harness.");
    get_to(j, "eval_episodes", c.eval_episodes, "harness.");
    get_to(j, "compare_episodes", c.compare_episodes, "harness.");
    get_to(j, "workers", c.workers, "harness.");
    get_to(j, "checkpoint_interval", c.checkpoint_interval, "harness.");
    get_to(j, "greedy_eval", c.greedy_eval, "harness.");
}

}  // namespace

ExperimentConfig default_config(const std::string& profile) {
    ExperimentConfig cfg;
    cfg.profile = profile.empty() ? "paper" : profile;
    if (cfg.profile == "desk") {
        cfg.harness.total_episodes = 300;
        cfg.harness.checkpoint_interval = 100;
        cfg.curriculum.phase1_episodes = 150;
        cfg.ppo.batch_size = 1024;
        cfg.ppo.minibatch_size = 128;
    } else if (cfg.profile != "paper") {
        throw ConfigError("profile: unknown profile '" + profile + "' (expected paper or desk)");
    }
    return cfg;
}

ExperimentConfig parse_config(const json& doc, const std::string& profile) {
    if (!doc.is_object() && !doc.is_null())
        throw ConfigError("config: top level must be a JSON object");

    std::string effective_profile = profile;
    if (effective_profile.empty() && doc.is_object() && doc.contains("profile"))
        effective_profile = doc.at("profile").get<std::string>();
    if (effective_profile.empty()) effective_profile = "paper";

    ExperimentConfig cfg = default_config(effective_profile);
    if (doc.is_null() || doc.empty()) {
        cfg.validate();
        return cfg;
    }

    check_keys(doc, "",
               {"profile", "seed", "array", "budget", "sensing", "reward", "env", "ppo",
                "curriculum", "baseline", "harness"});
    get_to(doc, "seed", cfg.seed, "");
    if (doc.contains("array")) apply_array(doc.at("array"), cfg.array);
    if (doc.contains("budget")) apply_budget(doc.at("budget"), cfg.budget);
    if (doc.contains("sensing")) apply_sensing(doc.at("sensing"), cfg.sensing);
    if (doc.contains("reward")) apply_reward(doc.at("reward"), cfg.reward);
    if (doc.contains("env")) apply_env(doc.at("env"), cfg.env);
    if (doc.contains("ppo")) apply_ppo(doc.at("ppo"), cfg.ppo);
    if (doc.contains("curriculum")) apply_curriculum(doc.at("curriculum"), cfg.curriculum);
    if (doc.contains("baseline")) apply_baseline(doc.at("baseline"), cfg.baseline);
    if (doc.contains("harness")) apply_harness(doc.at("harness"), cfg.harness);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::string& profile) {
    if (path.empty()) {
        ExperimentConfig cfg = default_config(profile.empty() ? "paper" : profile);
        cfg.validate();
        return cfg;
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config: parse error in " + path + ": " + e.what());
    }
    return parse_config(doc, profile);
}

json ExperimentConfig::to_json() const {
    json j;
    j["profile"] = profile;
    j["seed"] = seed;
    j["array"] = {{"rows", array.rows},
                  {"cols", array.cols},
                  {"element_spacing", array.element_spacing},
                  {"carrier_frequency_hz", array.carrier_frequency_hz}};
    j["budget"] = {{"tx_power_dbm", budget.tx_power_dbm},
                   {"noise_psd_dbm_hz", budget.noise_psd_dbm_hz},
                   {"bandwidth_hz", budget.bandwidth_hz}};
    j["sensing"] = {
        {"alpha", sensing.alpha},
        {"beta", sensing.beta},
        {"model_variant", sensing.model == sensing::DetectionModel::kPaper ? "paper" : "attenuated"},
        {"alignment_sigma_deg", sensing.alignment_sigma_deg},
        {"range_noise_m", sensing.range_noise_m},
        {"azimuth_noise_deg", sensing.azimuth_noise_deg}};
    j["reward"] = {{"w_det", reward.w_det},
                   {"w_pro", reward.w_pro},
                   {"w_unaware", reward.w_unaware},
                   {"w_com", reward.w_com},
                   {"conf_threshold", reward.conf_threshold},
                   {"near_threshold_m", reward.near_threshold_m},
                   {"effort_threshold", reward.effort_threshold},
                   {"sinr_threshold_db", reward.sinr_threshold_db}};
    j["env"] = {{"episode_length", env.episode_length},
                {"position_jitter_m", env.position_jitter_m},
                {"azimuth_jitter_deg", env.azimuth_jitter_deg},
                {"initial_effort", env.initial_effort},
                {"beam_step_deg", env.beam_step_deg},
                {"effort_step", env.effort_step},
                {"user_range_min_m", env.bounds.user_range_min_m},
                {"user_range_max_m", env.bounds.user_range_max_m},
                {"user_azimuth_abs_max_deg", env.bounds.user_azimuth_abs_max_deg},
                {"attacker_range_min_m", env.bounds.attacker_range_min_m},
                {"attacker_range_max_m", env.bounds.attacker_range_max_m},
                {"attacker_offset_min_deg", env.bounds.attacker_offset_min_deg},
                {"attacker_offset_max_deg", env.bounds.attacker_offset_max_deg},
                {"sinr_norm_min_db", env.sinr_norm_min_db},
                {"sinr_norm_max_db", env.sinr_norm_max_db},
                {"range_norm_min_m", env.range_norm_min_m},
                {"range_norm_max_m", env.range_norm_max_m}};
    j["ppo"] = {{"actor_lr", ppo.actor_lr},
                {"critic_lr", ppo.critic_lr},
                {"gamma", ppo.gamma},
                {"gae_lambda", ppo.gae_lambda},
                {"clip_epsilon", ppo.clip_epsilon},
                {"epochs", ppo.epochs},
                {"batch_size", ppo.batch_size},
                {"minibatch_size", ppo.minibatch_size},
                {"entropy_coef", ppo.entropy_coef},
                {"adam_beta1", ppo.adam_beta1},
                {"adam_beta2", ppo.adam_beta2},
                {"adam_epsilon", ppo.adam_epsilon},
                {"grad_clip_norm", ppo.grad_clip_norm},
                {"reward_scale", ppo.reward_scale},
                {"normalize_advantages", ppo.normalize_advantages},
                {"override_handling",
                 ppo.override_handling == ppo::OverrideHandling::kExclude ? "exclude" : "on_policy"},
                {"hidden_sizes", ppo.hidden_sizes}};
    j["curriculum"] = {{"enabled", curriculum.enabled},
                       {"phase1_episodes", curriculum.phase1_episodes},
                       {"forced_steps_per_episode", curriculum.forced_steps_per_episode},
                       {"phase2_override_prob", curriculum.phase2_override_prob}};
    j["baseline"] = {{"relay_delay_excess_ns", baseline.relay_delay_excess_ns},
                     {"relay_gain_db", baseline.relay_gain_db},
                     {"alarm_margin_db", baseline.alarm_margin_db},
                     {"power_jitter_db", baseline.power_jitter_db},
                     {"attack_probability", baseline.attack_probability}};
    j["harness"] = {{"total_episodes", harness.total_episodes},
                    {"eval_episodes", harness.eval_episodes},
                    {"compare_episodes", harness.compare_episodes},
                    {"workers", harness.workers},
                    {"checkpoint_interval", harness.checkpoint_interval},
                    {"greedy_eval", harness.greedy_eval}};
    return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(to_json().dump()); }

}  // namespace beamguard::config
