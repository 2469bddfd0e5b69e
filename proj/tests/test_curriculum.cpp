// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "core/curriculum.hpp"
#include "core/environment.hpp"
#include "core/errors.hpp"

using namespace beamguard;
using namespace beamguard::curriculum;

TEST_CASE("phase schedule") {
    CurriculumConfig cfg;  // 1500-episode phase 1
    CHECK(phase_of(0, cfg) == Phase::kPhase1);
    CHECK(phase_of(1499, cfg) == Phase::kPhase1);
    CHECK(phase_of(1500, cfg) == Phase::kPhase2);
    CHECK(phase_of(100000, cfg) == Phase::kPhase2);

    CurriculumConfig off = cfg;
    off.enabled = false;
    for (std::size_t e : {0u, 1499u, 1500u, 9999u}) CHECK(phase_of(e, off) == Phase::kOff);
}

TEST_CASE("episode plans") {
    CurriculumConfig cfg;
    Rng rng = make_rng(1, RngStream::kCurriculum, 0);

    SUBCASE("phase 1 draws exactly five distinct in-range steps") {
        for (int trial = 0; trial < 1000; ++trial) {
            const OverridePlan plan = plan_episode(Phase::kPhase1, 50, cfg, rng);
            REQUIRE(plan.forced_steps.size() == 5);
            std::set<std::size_t> unique(plan.forced_steps.begin(), plan.forced_steps.end());
            REQUIRE(unique.size() == 5);
            for (const std::size_t s : plan.forced_steps) REQUIRE(s < 50);
        }
    }

    SUBCASE("phase 2 and off plans are empty") {
        CHECK(plan_episode(Phase::kPhase2, 50, cfg, rng).forced_steps.empty());
        CHECK(plan_episode(Phase::kOff, 50, cfg, rng).forced_steps.empty());
    }

    SUBCASE("episodes shorter than the forced count are rejected") {
        CHECK_THROWS_AS(plan_episode(Phase::kPhase1, 4, cfg, rng), ConfigError);
    }

    SUBCASE("step positions are covered uniformly") {
        const int plans = 100000;
        std::vector<int> counts(50, 0);
        for (int p = 0; p < plans; ++p) {
            const OverridePlan plan = plan_episode(Phase::kPhase1, 50, cfg, rng);
            for (const std::size_t s : plan.forced_steps) counts[s]++;
        }
        const double expected = plans * 5.0 / 50.0;
        for (const int c : counts) {
            CHECK(c > expected * 0.95);
            CHECK(c < expected * 1.05);
        }
    }
}

TEST_CASE("override decisions") {
    CurriculumConfig cfg;
    Rng rng = make_rng(2, RngStream::kCurriculum, 1);

    SUBCASE("phase 1 fires exactly on planned steps") {
        OverridePlan plan;
        plan.phase = Phase::kPhase1;
        plan.forced_steps = {3, 7, 11, 30, 49};
        for (std::size_t t = 0; t < 50; ++t) {
            const bool expected = plan.contains(t);
            CHECK(should_override(Phase::kPhase1, plan, t, cfg, rng) == expected);
        }
    }

    SUBCASE("phase 2 fires at the configured rate") {
        OverridePlan plan;
        plan.phase = Phase::kPhase2;
        int fired = 0;
        const int n = 100000;
        for (int t = 0; t < n; ++t)
            if (should_override(Phase::kPhase2, plan, t % 50, cfg, rng)) ++fired;
        const double freq = static_cast<double>(fired) / n;
        CHECK(freq > 0.09);
        CHECK(freq < 0.11);
    }

    SUBCASE("disabled curriculum never overrides") {
        OverridePlan plan;
        plan.phase = Phase::kOff;
        for (int t = 0; t < 1000; ++t)
            CHECK_FALSE(should_override(Phase::kOff, plan, t, cfg, rng));
    }
}

TEST_CASE("forced action payload") {
    const ForcedAction payload = forced_action(37.0);
    CHECK(payload.beam_azimuth_deg == 37.0);
    CHECK(payload.effort == 1.0);
    CHECK(payload.force_detection);
}

TEST_CASE("a planned phase-1 episode banks the guaranteed detection rewards") {
    env::Environment environment(env::EnvConfig{}, env::RewardConfig{}, sensing::SensingParams{},
                                 channel::ArrayConfig{}, channel::LinkBudget{},
                                 env::StateMode::kTrain);
    CurriculumConfig cfg;
    Rng rng = make_rng(3, RngStream::kCurriculum, 17);
    const OverridePlan plan = plan_episode(Phase::kPhase1, 50, cfg, rng);

    environment.reset(3, 17);
    double forced_reward = 0.0;
    for (std::size_t t = 0; t < 50; ++t) {
        std::optional<ForcedAction> forced;
        if (plan.contains(t))
            forced = forced_action(environment.state().attacker_azimuth_deg);
        const env::StepOutcome out = environment.step(env::kNoOp, forced);
        if (forced) {
            CHECK(out.info.detection);
            forced_reward += out.reward;
        }
    }
    CHECK(forced_reward >= 5.0 * 150.0);
}

TEST_CASE("first 1500 episodes at defaults provide exactly 7500 forced steps") {
    CurriculumConfig cfg;
    std::size_t total = 0;
    for (std::size_t e = 0; e < 1500; ++e) {
        Rng rng = make_rng(7, RngStream::kCurriculum, e);
        const Phase phase = phase_of(e, cfg);
        REQUIRE(phase == Phase::kPhase1);
        total += plan_episode(phase, 50, cfg, rng).forced_steps.size();
    }
    CHECK(total == 7500);
}
