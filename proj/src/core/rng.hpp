// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <cstdint>
#include <random>

namespace beamguard {

using Rng = std::mt19937_64;

// Purpose tags for deriving independent RNG streams from one master seed.
// Keeping scenario/sensor/policy streams separate means the geometry of an
// episode depends only on (seed, episode index), never on what the policy or
// the sensors did - which is what makes paired agent/baseline runs and
// multi-worker rollouts line up on identical scenarios.
enum class RngStream : std::uint32_t {
    kScenario = 1,
    kSensor = 2,
    kPolicy = 3,
    kCurriculum = 4,
    kNetworkInit = 5,
    kShuffle = 6,
    kBaseline = 7,
    kBootstrap = 8,
};

/// Deterministic per-(seed, purpose, index) engine.
inline Rng make_rng(std::uint64_t master_seed, RngStream purpose, std::uint64_t index = 0) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(master_seed),
        static_cast<std::uint32_t>(master_seed >> 32),
        static_cast<std::uint32_t>(purpose),
        static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32),
    };
    return Rng(seq);
}

}  // namespace beamguard
