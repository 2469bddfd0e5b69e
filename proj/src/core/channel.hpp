// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace beamguard::channel {

/// Uniform planar array geometry. Default: 8x8 half-wavelength array at 28 GHz.
struct ArrayConfig {
    std::size_t rows = 8;
    std::size_t cols = 8;
    double element_spacing = 0.5;       // in wavelengths
    double carrier_frequency_hz = 28e9;

    std::size_t element_count() const { return rows * cols; }
    void validate() const;  // throws ConfigError on bad fields
};

/// Transmit power and noise budget. Defaults: 30 dBm, -174 dBm/Hz, 100 MHz.
struct LinkBudget {
    double tx_power_dbm = 30.0;
    double noise_psd_dbm_hz = -174.0;
    double bandwidth_hz = 100e6;

    void validate() const;
};

using ComplexVector = std::vector<std::complex<double>>;

/// Per-element complex channel between the BS array and a single-antenna user.
struct ChannelVector {
    ComplexVector coefficients;
};

/// Unit-norm complex beamforming weights.
struct BeamWeights {
    ComplexVector coefficients;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Total noise power in dBm: noise_psd + 10*log10(bandwidth).
double noise_power_dbm(const LinkBudget& budget);

/// Total noise power in linear watts.
double noise_power_watts(const LinkBudget& budget);

/// Normalized planar-array response toward (azimuth, elevation), degrees.
/// Element (m, n) carries phase -2*pi*spacing*(m*sin(az)*cos(el) + n*sin(el))
/// and magnitude 1/sqrt(N), so the response has unit Euclidean norm. Angles
/// outside [-180, 180) are wrapped. The phase sign is the beam-steering
/// convention; every observable below depends only on |h^H w|.
ComplexVector steering_vector(double azimuth_deg, double elevation_deg, const ArrayConfig& array);

/// Friis free-space loss in dB: 20*log10(d) + 20*log10(f) - 147.55.
/// Distances below 1 m are clamped to 1 m.
double path_loss_db(double distance_m, double frequency_hz);

/// Channel vector for a user at (range, azimuth, elevation):
/// h = sqrt(N * tx_power * path_gain) * steering_vector(az, el), so a matched
/// unit beam collects the full N-element array gain. Throws DomainError when
/// the user sits at the array origin (range < 1e-6 m).
ChannelVector channel_vector(double range_m, double azimuth_deg, double elevation_deg,
                             const ArrayConfig& array, const LinkBudget& budget);

/// Matched beam toward (azimuth, 0): the conjugate-steered array response,
/// normalized to ||w|| = 1.
BeamWeights beam_weights(double beam_azimuth_deg, const ArrayConfig& array);

/// 10*log10(|h^H w|^2 / noise). Exact nulls return the documented floor.
double sinr_db(const ChannelVector& h, const BeamWeights& w, double noise_watts);

inline constexpr double kSinrFloorDb = -200.0;

}  // namespace beamguard::channel
