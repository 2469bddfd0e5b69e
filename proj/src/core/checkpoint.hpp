// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <cstdint>
#include <string>

#include "core/ppo.hpp"

namespace beamguard::checkpoint {

// Binary layout (little-endian):
//   magic "BGCP" | u32 format version | u64 config hash | u64 episode
//   | u32 tensor count | per tensor: u32 rows, u32 cols, rows*cols f64
// Weights and biases alternate per layer (bias stored as a 1 x n tensor),
// actor tensors first, then critic. Doubles are written raw, so a
// save/load round trip reproduces every weight bit-exactly.
inline constexpr std::uint32_t kFormatVersion = 1;

struct LoadedCheckpoint {
    ppo::ActorCritic nets;
    std::uint64_t config_hash = 0;
    std::uint64_t episode = 0;
};

void save(const std::string& path, const ppo::ActorCritic& nets, std::uint64_t config_hash,
          std::uint64_t episode);

/// Throws IoError on unreadable files and DomainError on bad magic, version,
/// or inconsistent tensor shapes. Config-hash agreement is the caller's
/// check (a mismatch is a warning, not a load failure).
LoadedCheckpoint load(const std::string& path);

}  // namespace beamguard::checkpoint
