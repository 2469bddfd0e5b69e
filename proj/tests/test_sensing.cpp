// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/sensing.hpp"
#include "support/oracles.hpp"

using namespace beamguard;
using namespace beamguard::sensing;

namespace {
SensingParams params_with(DetectionModel model, double alpha = 3.0, double beta = 0.0025) {
    SensingParams p;
    p.model = model;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}
}  // namespace

TEST_CASE("detection probability endpoints") {
    const auto paper = params_with(DetectionModel::kPaper);
    const auto attenuated = params_with(DetectionModel::kAttenuated);

    CHECK(detection_probability(0.0, 0.0, paper) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(detection_probability(0.0, 0.0, attenuated) == doctest::Approx(0.0).epsilon(1e-15));

    // (e=1, d=0, attenuated, alpha=3) -> 1 - exp(-3)
    CHECK(detection_probability(1.0, 0.0, attenuated) ==
          doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-12));
    CHECK(detection_probability(1.0, 0.0, attenuated) == doctest::Approx(0.9502).epsilon(1e-4));

    // both variants agree at d = 0
    CHECK(detection_probability(0.7, 0.0, paper) ==
          doctest::Approx(detection_probability(0.7, 0.0, attenuated)).epsilon(1e-12));
}

TEST_CASE("distance behavior differs between the printed and attenuated forms") {
    const auto paper = params_with(DetectionModel::kPaper);
    const auto attenuated = params_with(DetectionModel::kAttenuated);

    // finite-difference sweep over d in [0, 200] at fixed effort
    const double effort = 0.6;
    for (double d = 0.0; d < 200.0; d += 2.0) {
        const double paper_here = detection_probability(effort, d, paper);
        const double paper_next = detection_probability(effort, d + 2.0, paper);
        CHECK(paper_next >= paper_here - 1e-15);  // printed form grows with distance

        const double att_here = detection_probability(effort, d, attenuated);
        const double att_next = detection_probability(effort, d + 2.0, attenuated);
        CHECK(att_next <= att_here + 1e-15);  // attenuated form decays
    }

    // attenuated form is monotone increasing in effort on a grid
    for (double d : {0.0, 40.0, 120.0}) {
        for (double e = 0.0; e < 1.0; e += 0.05) {
            CHECK(detection_probability(e + 0.05, d, attenuated) >=
                  detection_probability(e, d, attenuated) - 1e-15);
        }
    }
}

TEST_CASE("probabilities stay in [0, 1]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> effort(0.0, 1.0);
    std::uniform_real_distribution<double> dist(0.0, 500.0);
    const auto paper = params_with(DetectionModel::kPaper);
    const auto attenuated = params_with(DetectionModel::kAttenuated);
    for (int i = 0; i < 1000000; ++i) {
        const double e = effort(rng);
        const double d = dist(rng);
        const double p1 = detection_probability(e, d, paper);
        const double p2 = detection_probability(e, d, attenuated);
        REQUIRE(p1 >= 0.0);
        REQUIRE(p1 <= 1.0);
        REQUIRE(p2 >= 0.0);
        REQUIRE(p2 <= 1.0);
    }
}

TEST_CASE("alignment gain") {
    SensingParams p;  // sigma = 10 degrees
    CHECK(alignment_gain(42.0, 42.0, p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(alignment_gain(10.0, 0.0, p) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(alignment_gain(10.0, 0.0, p) == doctest::Approx(0.6065).epsilon(1e-4));
    // symmetry
    CHECK(alignment_gain(13.0, -27.0, p) == doctest::Approx(alignment_gain(-27.0, 13.0, p)));
    // wrap: 179 vs -179 is a 2-degree difference
    CHECK(alignment_gain(179.0, -179.0, p) ==
          doctest::Approx(std::exp(-4.0 / 200.0)).epsilon(1e-12));
}

TEST_CASE("measurement noise statistics") {
    SensingParams p;  // 1.5 m, 3 deg

    SUBCASE("degenerate sigmas pass through exactly") {
        SensingParams exact = p;
        exact.range_noise_m = 0.0;
        exact.azimuth_noise_deg = 0.0;
        Rng rng = make_rng(0, RngStream::kSensor, 0);
        const Measurement m = measure(77.5, 12.25, exact, rng);
        CHECK(m.est_range_m == 77.5);
        CHECK(m.est_azimuth_deg == 12.25);
    }

    SUBCASE("sample moments match the configured sigmas") {
        Rng rng = make_rng(42, RngStream::kSensor, 0);
        const int n = 100000;
        std::vector<double> range_err, az_err;
        range_err.reserve(n);
        az_err.reserve(n);
        for (int i = 0; i < n; ++i) {
            const Measurement m = measure(100.0, 0.0, p, rng);
            range_err.push_back(m.est_range_m - 100.0);
            az_err.push_back(m.est_azimuth_deg);
        }
        const auto r = oracles::mean_std(range_err);
        const auto a = oracles::mean_std(az_err);
        CHECK(std::abs(r.mean) < 0.05);
        CHECK(std::abs(a.mean) < 0.1);
        CHECK(r.std == doctest::Approx(1.5).epsilon(0.03));
        CHECK(a.std == doctest::Approx(3.0).epsilon(0.03));
    }

    SUBCASE("range clamps at zero") {
        SensingParams wide = p;
        wide.range_noise_m = 10.0;
        Rng rng = make_rng(7, RngStream::kSensor, 1);
        for (int i = 0; i < 20000; ++i) {
            const Measurement m = measure(0.5, 0.0, wide, rng);
            CHECK(m.est_range_m >= 0.0);
        }
    }
}

TEST_CASE("confidence composes detection probability and alignment") {
    const auto attenuated = params_with(DetectionModel::kAttenuated);

    // zero effort kills the attenuated variant regardless of alignment
    CHECK(confidence(0.0, 10.0, 0.0, 0.0, attenuated) == doctest::Approx(0.0).epsilon(1e-15));

    // forced-success operating point: aimed, full effort, zero range
    CHECK(confidence(1.0, 0.0, 37.0, 37.0, attenuated) ==
          doctest::Approx(0.9502).epsilon(1e-4));

    // the alignment factor can only reduce the probability
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> az(-180.0, 180.0);
    std::uniform_real_distribution<double> effort(0.0, 1.0);
    std::uniform_real_distribution<double> dist(0.0, 200.0);
    for (int i = 0; i < 10000; ++i) {
        const double e = effort(rng), d = dist(rng), beam = az(rng), target = az(rng);
        CHECK(confidence(e, d, beam, target, attenuated) <=
              detection_probability(e, d, attenuated) + 1e-15);
    }

    // continuity in beam azimuth: the Gaussian kernel bounds the step change
    // on a 0.1-degree grid (sigma 10 deg -> max slope ~ exp(-1/2)/sigma)
    const double lipschitz = 0.0075;  // > exp(-0.5)/10 per degree, times 0.1 deg, with margin
    double prev = confidence(1.0, 0.0, -40.0, 0.0, attenuated);
    for (double beam = -39.9; beam <= 40.0; beam += 0.1) {
        const double cur = confidence(1.0, 0.0, beam, 0.0, attenuated);
        CHECK(std::abs(cur - prev) <= lipschitz);
        prev = cur;
    }
}
