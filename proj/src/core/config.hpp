// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "core/baseline.hpp"
#include "core/channel.hpp"
#include "core/curriculum.hpp"
#include "core/environment.hpp"
#include "core/ppo.hpp"
#include "core/sensing.hpp"

namespace beamguard::config {

/// Training-run and output bookkeeping knobs.
struct HarnessConfig {
    std::size_t total_episodes = 3000;
    std::size_t eval_episodes = 100;
    std::size_t compare_episodes = 200;
    std::size_t workers = 1;
    std::size_t checkpoint_interval = 100;
    bool greedy_eval = true;

    void validate() const;
};

/// Everything one experiment needs, flattened from the per-module configs.
/// Profiles: "paper" keeps the published hyperparameters and the
/// 1500-episode curriculum; "desk" scales the run down to laptop size
/// (300 episodes, 150-episode curriculum, batch 1024, minibatch 128).
struct ExperimentConfig {
    std::string profile = "paper";
    std::uint64_t seed = 0;

    channel::ArrayConfig array;
    channel::LinkBudget budget;
    sensing::SensingParams sensing;
    env::RewardConfig reward;
    env::EnvConfig env;
    ppo::PpoConfig ppo;
    curriculum::CurriculumConfig curriculum;
    baseline::BaselineConfig baseline;
    HarnessConfig harness;

    void validate() const;
    nlohmann::json to_json() const;

    /// FNV-1a over the canonical (sorted-key) JSON dump. Embedded in every
    /// output artifact and in checkpoints.
    std::uint64_t hash() const;
};

ExperimentConfig default_config(const std::string& profile);

/// Applies a JSON document on top of profile defaults. Unknown keys are
/// rejected with a nearest-known-key suggestion; invariant violations name
/// the offending key path.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::string& profile);

/// Loads a JSON config file. An empty `profile` defers to the file's own
/// "profile" key (default "paper"). An empty path yields profile defaults.
ExperimentConfig load_config(const std::string& path, const std::string& profile = "");

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace beamguard::config
