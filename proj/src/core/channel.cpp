// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/channel.hpp"

#include <cmath>

#include "core/angles.hpp"
#include "core/errors.hpp"

namespace beamguard::channel {

void ArrayConfig::validate() const {
    if (rows == 0 || cols == 0)
        throw ConfigError("array: rows and cols must be positive");
    if (element_spacing <= 0.0)
        throw ConfigError("array: element_spacing must be positive");
    if (carrier_frequency_hz <= 0.0)
        throw ConfigError("array: carrier_frequency_hz must be positive");
}

void LinkBudget::validate() const {
    if (bandwidth_hz <= 0.0)
        throw ConfigError("budget: bandwidth_hz must be positive");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double noise_power_dbm(const LinkBudget& budget) {
    budget.validate();
    return budget.noise_psd_dbm_hz + 10.0 * std::log10(budget.bandwidth_hz);
}

double noise_power_watts(const LinkBudget& budget) {
    return dbm_to_watts(noise_power_dbm(budget));
}

ComplexVector steering_vector(double azimuth_deg, double elevation_deg, const ArrayConfig& array) {
    const double az = deg_to_rad(wrap_degrees(azimuth_deg));
    const double el = deg_to_rad(wrap_degrees(elevation_deg));
    const std::size_t n_elements = array.element_count();

    const double horizontal = std::sin(az) * std::cos(el);
    const double vertical = std::sin(el);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));

    ComplexVector response(n_elements);
    std::size_t idx = 0;
    for (std::size_t m = 0; m < array.rows; ++m) {
        for (std::size_t n = 0; n < array.cols; ++n) {
            const double phase = -2.0 * kPi * array.element_spacing *
                                 (static_cast<double>(m) * horizontal + static_cast<double>(n) * vertical);
            response[idx++] = std::polar(scale, phase);
        }
    }
    return response;
}

double path_loss_db(double distance_m, double frequency_hz) {
    // Friis free space, stand-in for a full stochastic channel stack.
    const double d = std::max(distance_m, 1.0);  // near-field clamp
    return 20.0 * std::log10(d) + 20.0 * std::log10(frequency_hz) - 147.55;
}

ChannelVector channel_vector(double range_m, double azimuth_deg, double elevation_deg,
                             const ArrayConfig& array, const LinkBudget& budget) {
    if (!(range_m > 1e-6))
        throw DomainError("channel_vector: user is at the array origin");

    const double loss_db = path_loss_db(range_m, array.carrier_frequency_hz);
    const double rx_power_w = dbm_to_watts(budget.tx_power_dbm - loss_db);
    // sqrt(N * P_rx): the normalized response carries 1/sqrt(N) per element,
    // so a matched beam yields |h^H w|^2 = N * P_rx (full array gain).
    const double amplitude = std::sqrt(static_cast<double>(array.element_count()) * rx_power_w);

    ChannelVector h{steering_vector(azimuth_deg, elevation_deg, array)};
    for (auto& c : h.coefficients) c *= amplitude;
    return h;
}

BeamWeights beam_weights(double beam_azimuth_deg, const ArrayConfig& array) {
    // steering_vector already has unit norm, so this is the matched filter.
    return BeamWeights{steering_vector(beam_azimuth_deg, 0.0, array)};
}

double sinr_db(const ChannelVector& h, const BeamWeights& w, double noise_watts) {
    if (!(noise_watts > 0.0))
        throw DomainError("sinr_db: noise power must be positive");
    if (h.coefficients.size() != w.coefficients.size())
        throw DomainError("sinr_db: channel/beam dimension mismatch");

    std::complex<double> inner{0.0, 0.0};
    for (std::size_t i = 0; i < h.coefficients.size(); ++i)
        inner += std::conj(h.coefficients[i]) * w.coefficients[i];

    const double signal = std::norm(inner);
    if (signal == 0.0) return kSinrFloorDb;
    return 10.0 * std::log10(signal / noise_watts);
}

}  // namespace beamguard::channel
