// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <cstdint>
#include <vector>

#include "core/rng.hpp"

namespace beamguard::baseline {

/// One multipath tap. Powers are stored relative to the strongest tap
/// (strongest = 0 dB), delays in nanoseconds, ascending.
struct PdpTap {
    double delay_ns = 0.0;
    double power_db = 0.0;
};

struct PowerDelayProfile {
    std::vector<PdpTap> taps;
};

struct BaselineConfig {
    double relay_delay_excess_ns = 50.0;  // extra path length of the relay
    double relay_gain_db = 3.0;           // amplification over the direct path
    double alarm_margin_db = 0.0;
    double power_jitter_db = 1.0;         // per-tap Gaussian power jitter
    // Fraction of episodes in which the amplify-and-relay manipulation is
    // actually injected; episodes without it leave nothing in the PDP to
    // flag, which makes per-episode detection close to a coin with this
    // bias. (The RL agent senses the attacker's presence instead, so its
    // detection statistic is not gated by this.)
    double attack_probability = 0.6;

    void validate() const;
};

/// Builds the two-tap (or single-tap) profile for one probe: the direct path
/// at its geometric delay and, when the attack is active, the amplified
/// relay echo at +relay_delay_excess with +relay_gain dB.
PowerDelayProfile synth_pdp(double direct_delay_ns, double direct_power_dbm, bool attack_active,
                            const BaselineConfig& cfg, Rng& rng);

/// SecBeam rule: alarm iff a tap arriving after the first one exceeds the
/// first tap's power by more than the margin. Throws on an empty profile.
bool secbeam_detect(const PowerDelayProfile& pdp, const BaselineConfig& cfg);

}  // namespace beamguard::baseline
