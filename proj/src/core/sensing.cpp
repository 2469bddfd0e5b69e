// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "core/angles.hpp"
#include "core/errors.hpp"

namespace beamguard::sensing {

void SensingParams::validate() const {
    if (alpha <= 0.0) throw ConfigError("sensing: alpha must be positive");
    if (beta <= 0.0) throw ConfigError("sensing: beta must be positive");
    if (alignment_sigma_deg <= 0.0) throw ConfigError("sensing: alignment_sigma_deg must be positive");
    if (range_noise_m < 0.0) throw ConfigError("sensing: range_noise_m must be non-negative");
    if (azimuth_noise_deg < 0.0) throw ConfigError("sensing: azimuth_noise_deg must be non-negative");
}

double detection_probability(double effort, double distance_m, const SensingParams& params) {
    const double e = std::clamp(effort, 0.0, 1.0);
    const double d = std::max(distance_m, 0.0);
    const double effort_term = 1.0 - std::exp(-params.alpha * e);
    const double distance_term = std::exp(-params.beta * d);

    double p = 0.0;
    switch (params.model) {
        case DetectionModel::kPaper:
            p = 1.0 - std::exp(-params.alpha * e) * distance_term;
            break;
        case DetectionModel::kAttenuated:
            p = effort_term * distance_term;
            break;
    }
    return std::clamp(p, 0.0, 1.0);
}

double alignment_gain(double beam_azimuth_deg, double attacker_azimuth_deg,
                      const SensingParams& params) {
    const double delta = angular_difference(beam_azimuth_deg, attacker_azimuth_deg);
    const double sigma = params.alignment_sigma_deg;
    return std::exp(-(delta * delta) / (2.0 * sigma * sigma));
}

Measurement measure(double true_range_m, double true_azimuth_deg, const SensingParams& params,
                    Rng& rng) {
    double range = true_range_m;
    double azimuth = true_azimuth_deg;
    // Degenerate sigmas pass the truth through untouched (no RNG draw).
    if (params.range_noise_m > 0.0) {
        std::normal_distribution<double> noise(0.0, params.range_noise_m);
        range += noise(rng);
    }
    if (params.azimuth_noise_deg > 0.0) {
        std::normal_distribution<double> noise(0.0, params.azimuth_noise_deg);
        azimuth += noise(rng);
    }
    return Measurement{std::max(range, 0.0), wrap_degrees(azimuth)};
}

double confidence(double effort, double true_distance_m, double beam_azimuth_deg,
                  double true_azimuth_deg, const SensingParams& params) {
    return detection_probability(effort, true_distance_m, params) *
           alignment_gain(beam_azimuth_deg, true_azimuth_deg, params);
}

}  // namespace beamguard::sensing
