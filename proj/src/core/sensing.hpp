// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include "core/rng.hpp"

namespace beamguard::sensing {

enum class DetectionModel {
    // 1 - exp(-alpha*e) * exp(-beta*d): as printed, grows with distance.
    kPaper,
    // (1 - exp(-alpha*e)) * exp(-beta*d): distance actually attenuates.
    kAttenuated,
};

struct SensingParams {
    double alpha = 3.0;               // per-unit-effort detection rate
    double beta = 0.0025;             // per-meter attenuation rate
    DetectionModel model = DetectionModel::kAttenuated;
    double alignment_sigma_deg = 10.0;  // Gaussian beamwidth of the sensing gain
    double range_noise_m = 1.5;
    double azimuth_noise_deg = 3.0;

    void validate() const;
};

/// Noisy attacker fix. Range clamped at 0, azimuth wrapped to [-180, 180).
struct Measurement {
    double est_range_m = 0.0;
    double est_azimuth_deg = 0.0;
};

/// Probability of detecting the attacker given sensing effort in [0,1] and
/// true distance in meters.
double detection_probability(double effort, double distance_m, const SensingParams& params);

/// Gaussian roll-off of the sensing gain with beam/attacker misalignment:
/// exp(-d_theta^2 / (2 sigma^2)), d_theta wrapped.
double alignment_gain(double beam_azimuth_deg, double attacker_azimuth_deg,
                      const SensingParams& params);

/// One noisy range/azimuth fix of the attacker.
Measurement measure(double true_range_m, double true_azimuth_deg, const SensingParams& params,
                    Rng& rng);

/// Deterministic threat confidence: detection_probability * alignment_gain.
double confidence(double effort, double true_distance_m, double beam_azimuth_deg,
                  double true_azimuth_deg, const SensingParams& params);

}  // namespace beamguard::sensing
