// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/curriculum.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace beamguard::curriculum {

void CurriculumConfig::validate(std::size_t episode_length) const {
    if (forced_steps_per_episode > episode_length)
        throw ConfigError("curriculum: forced_steps_per_episode exceeds episode_length");
    if (phase2_override_prob < 0.0 || phase2_override_prob > 1.0)
        throw ConfigError("curriculum: phase2_override_prob must be in [0, 1]");
}

bool OverridePlan::contains(std::size_t step_index) const {
    return std::binary_search(forced_steps.begin(), forced_steps.end(), step_index);
}

Phase phase_of(std::size_t episode_index, const CurriculumConfig& config) {
    if (!config.enabled) return Phase::kOff;
    return episode_index < config.phase1_episodes ? Phase::kPhase1 : Phase::kPhase2;
}

OverridePlan plan_episode(Phase phase, std::size_t episode_length, const CurriculumConfig& config,
                          Rng& rng) {
    OverridePlan plan;
    plan.phase = phase;
    if (phase != Phase::kPhase1) return plan;

    if (episode_length < config.forced_steps_per_episode)
        throw ConfigError("curriculum: episode too short for the forced-success plan");

    // Floyd's algorithm: uniform sample of k distinct indices from [0, n).
    const std::size_t k = config.forced_steps_per_episode;
    const std::size_t n = episode_length;
    std::vector<std::size_t> picked;
    picked.reserve(k);
    for (std::size_t j = n - k; j < n; ++j) {
        std::uniform_int_distribution<std::size_t> dist(0, j);
        const std::size_t candidate = dist(rng);
        if (std::find(picked.begin(), picked.end(), candidate) != picked.end())
            picked.push_back(j);
        else
            picked.push_back(candidate);
    }
    std::sort(picked.begin(), picked.end());
    plan.forced_steps = std::move(picked);
    return plan;
}

bool should_override(Phase phase, const OverridePlan& plan, std::size_t step_index,
                     const CurriculumConfig& config, Rng& rng) {
    switch (phase) {
        case Phase::kPhase1:
            return plan.contains(step_index);
        case Phase::kPhase2: {
            std::bernoulli_distribution coin(config.phase2_override_prob);
            return coin(rng);
        }
        case Phase::kOff:
            return false;
    }
    return false;
}

ForcedAction forced_action(double true_attacker_azimuth_deg) {
    return ForcedAction{true_attacker_azimuth_deg, 1.0, true};
}

}  // namespace beamguard::curriculum
