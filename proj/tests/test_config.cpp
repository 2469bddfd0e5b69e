// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"

using namespace beamguard;
using namespace beamguard::config;
using nlohmann::json;

TEST_CASE("paper profile carries the published hyperparameters") {
    const ExperimentConfig cfg = parse_config(json::object(), "paper");
    CHECK(cfg.ppo.gamma == 0.99);
    CHECK(cfg.ppo.gae_lambda == 0.95);
    CHECK(cfg.ppo.clip_epsilon == 0.2);
    CHECK(cfg.ppo.epochs == 40);
    CHECK(cfg.ppo.batch_size == 4096);
    CHECK(cfg.ppo.actor_lr == 3e-4);
    CHECK(cfg.ppo.critic_lr == 1e-3);
    CHECK(cfg.curriculum.phase1_episodes == 1500);
    CHECK(cfg.curriculum.forced_steps_per_episode == 5);
    CHECK(cfg.curriculum.phase2_override_prob == 0.10);
    CHECK(cfg.array.rows * cfg.array.cols == 64);
    CHECK(cfg.budget.tx_power_dbm == 30.0);
    CHECK(cfg.budget.noise_psd_dbm_hz == -174.0);
    CHECK(cfg.budget.bandwidth_hz == 100e6);
    CHECK(cfg.sensing.range_noise_m == 1.5);
    CHECK(cfg.sensing.azimuth_noise_deg == 3.0);
    CHECK(cfg.reward.w_det == 150.0);
    CHECK(cfg.reward.w_pro == 25.0);
    CHECK(cfg.reward.w_unaware == 5.0);
    CHECK(cfg.reward.w_com == 0.5);
}

TEST_CASE("desk profile scales the run down") {
    const ExperimentConfig cfg = default_config("desk");
    CHECK(cfg.harness.total_episodes == 300);
    CHECK(cfg.curriculum.phase1_episodes == 150);
    CHECK(cfg.ppo.batch_size == 1024);
    CHECK(cfg.ppo.minibatch_size == 128);
}

TEST_CASE("unknown keys are rejected with a suggestion") {
    json doc;
    doc["ppo"]["gama"] = 0.9;
    try {
        parse_config(doc, "paper");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("gama") != std::string::npos);
        CHECK(msg.find("gamma") != std::string::npos);
    }

    json top;
    top["encironment"] = json::object();
    CHECK_THROWS_AS(parse_config(top, "paper"), ConfigError);
}

TEST_CASE("round trip through JSON preserves the config") {
    ExperimentConfig cfg = default_config("desk");
    cfg.seed = 424242;
    cfg.sensing.beta = 0.004;
    cfg.ppo.entropy_coef = 0.02;
    cfg.env.episode_length = 40;
    cfg.baseline.attack_probability = 0.5;
    cfg.ppo.override_handling = ppo::OverrideHandling::kTreatAsOnPolicy;
    cfg.sensing.model = sensing::DetectionModel::kPaper;

    const ExperimentConfig back = parse_config(cfg.to_json(), "");
    CHECK(back.hash() == cfg.hash());
    CHECK(back.seed == 424242);
    CHECK(back.sensing.beta == 0.004);
    CHECK(back.env.episode_length == 40);
    CHECK(back.profile == "desk");
    CHECK(back.ppo.override_handling == ppo::OverrideHandling::kTreatAsOnPolicy);
    CHECK(back.sensing.model == sensing::DetectionModel::kPaper);
}

TEST_CASE("invariant violations name the offending key") {
    json doc;
    doc["ppo"]["gamma"] = 1.5;
    try {
        parse_config(doc, "paper");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("gamma") != std::string::npos);
    }

    json doc2;
    doc2["budget"]["bandwidth_hz"] = -1.0;
    CHECK_THROWS_AS(parse_config(doc2, "paper"), ConfigError);

    json doc3;
    doc3["curriculum"]["forced_steps_per_episode"] = 200;  // > episode length
    CHECK_THROWS_AS(parse_config(doc3, "paper"), ConfigError);
}

TEST_CASE("file loading") {
    const auto path = std::filesystem::temp_directory_path() / "bg_config_test.json";

    SUBCASE("valid file applies on top of its profile") {
        std::ofstream out(path);
        out << R"({"profile": "desk", "seed": 7, "ppo": {"entropy_coef": 0.05}})";
        out.close();
        const ExperimentConfig cfg = load_config(path.string());
        CHECK(cfg.profile == "desk");
        CHECK(cfg.seed == 7);
        CHECK(cfg.ppo.entropy_coef == 0.05);
        CHECK(cfg.ppo.batch_size == 1024);  // desk default retained
    }

    SUBCASE("explicit profile argument wins over the file") {
        std::ofstream out(path);
        out << R"({"seed": 9})";
        out.close();
        const ExperimentConfig cfg = load_config(path.string(), "desk");
        CHECK(cfg.profile == "desk");
        CHECK(cfg.harness.total_episodes == 300);
    }

    SUBCASE("parse errors are config errors") {
        std::ofstream out(path);
        out << "{not json";
        out.close();
        CHECK_THROWS_AS(load_config(path.string()), ConfigError);
    }

    SUBCASE("missing file is a config error") {
        CHECK_THROWS_AS(load_config("/nonexistent/bg.json"), ConfigError);
    }

    std::filesystem::remove(path);
}

TEST_CASE("hash is stable and sensitive") {
    const ExperimentConfig a = default_config("paper");
    const ExperimentConfig b = default_config("paper");
    CHECK(a.hash() == b.hash());

    ExperimentConfig c = a;
    c.seed = 1;
    CHECK(c.hash() != a.hash());

    ExperimentConfig d = a;
    d.ppo.gamma = 0.98;
    CHECK(d.hash() != a.hash());
}
