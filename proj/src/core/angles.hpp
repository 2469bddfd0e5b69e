// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <cmath>
#include <numbers>

namespace beamguard {

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle in degrees to [-180, 180).
inline double wrap_degrees(double deg) {
    double w = std::fmod(deg + 180.0, 360.0);
    if (w < 0.0) w += 360.0;
    return w - 180.0;
}

/// Smallest signed angular difference a - b, wrapped to [-180, 180).
inline double angular_difference(double a_deg, double b_deg) {
    return wrap_degrees(a_deg - b_deg);
}

}  // namespace beamguard
