// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <cstddef>
#include <vector>

#include "core/rng.hpp"

namespace beamguard::curriculum {

struct CurriculumConfig {
    bool enabled = true;
    std::size_t phase1_episodes = 1500;
    std::size_t forced_steps_per_episode = 5;
    double phase2_override_prob = 0.10;

    void validate(std::size_t episode_length) const;
};

enum class Phase { kPhase1, kPhase2, kOff };

/// Forced-success schedule for one episode. Phase 1 plans hold exactly
/// forced_steps_per_episode distinct step indices; phase 2 and Off are empty
/// (phase 2 overrides are drawn per step instead).
struct OverridePlan {
    Phase phase = Phase::kOff;
    std::vector<std::size_t> forced_steps;  // sorted, unique

    bool contains(std::size_t step_index) const;
};

/// Payload applied in place of the agent's action on an override step: beam
/// snapped to the attacker's true direction, effort maxed, detection forced.
struct ForcedAction {
    double beam_azimuth_deg = 0.0;
    double effort = 1.0;
    bool force_detection = true;
};

Phase phase_of(std::size_t episode_index, const CurriculumConfig& config);

OverridePlan plan_episode(Phase phase, std::size_t episode_length, const CurriculumConfig& config,
                          Rng& rng);

/// Whether this step's action gets replaced. Phase 2 consumes one Bernoulli
/// draw per call; phase 1 and Off consume none.
bool should_override(Phase phase, const OverridePlan& plan, std::size_t step_index,
                     const CurriculumConfig& config, Rng& rng);

ForcedAction forced_action(double true_attacker_azimuth_deg);

}  // namespace beamguard::curriculum
