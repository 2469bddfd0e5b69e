// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/baseline.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace beamguard::baseline {

void BaselineConfig::validate() const {
    if (relay_delay_excess_ns <= 0.0)
        throw ConfigError("baseline: relay_delay_excess_ns must be positive");
    if (power_jitter_db < 0.0) throw ConfigError("baseline: power_jitter_db must be non-negative");
    if (attack_probability < 0.0 || attack_probability > 1.0)
        throw ConfigError("baseline: attack_probability must be in [0, 1]");
}

namespace {

double jitter(const BaselineConfig& cfg, Rng& rng) {
    if (cfg.power_jitter_db <= 0.0) return 0.0;
    std::normal_distribution<double> noise(0.0, cfg.power_jitter_db);
    return noise(rng);
}

}  // namespace

PowerDelayProfile synth_pdp(double direct_delay_ns, double direct_power_dbm, bool attack_active,
                            const BaselineConfig& cfg, Rng& rng) {
    PowerDelayProfile pdp;
    pdp.taps.push_back({direct_delay_ns, direct_power_dbm + jitter(cfg, rng)});
    if (attack_active) {
        pdp.taps.push_back({direct_delay_ns + cfg.relay_delay_excess_ns,
                            direct_power_dbm + cfg.relay_gain_db + jitter(cfg, rng)});
    }
    std::sort(pdp.taps.begin(), pdp.taps.end(),
              [](const PdpTap& a, const PdpTap& b) { return a.delay_ns < b.delay_ns; });

    // Re-reference powers to the strongest tap (0 dB relative).
    double strongest = pdp.taps.front().power_db;
    for (const auto& tap : pdp.taps) strongest = std::max(strongest, tap.power_db);
    for (auto& tap : pdp.taps) tap.power_db -= strongest;
    return pdp;
}

bool secbeam_detect(const PowerDelayProfile& pdp, const BaselineConfig& cfg) {
    if (pdp.taps.empty()) throw DomainError("secbeam_detect: empty profile");
    const double first_power = pdp.taps.front().power_db;
    for (std::size_t i = 1; i < pdp.taps.size(); ++i) {
        if (pdp.taps[i].power_db > first_power + cfg.alarm_margin_db) return true;
    }
    return false;
}

}  // namespace beamguard::baseline
