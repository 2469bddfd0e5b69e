// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "core/checkpoint.hpp"
#include "core/errors.hpp"

using namespace beamguard;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

ppo::ActorCritic sample_nets() {
    ppo::PpoConfig cfg;
    cfg.hidden_sizes = {16, 8};
    return ppo::ActorCritic::create(cfg, 12345);
}

}  // namespace

TEST_CASE("save/load round trip is bit exact") {
    const std::string path = temp_path("bg_ckpt_roundtrip.bgcp");
    const ppo::ActorCritic nets = sample_nets();
    checkpoint::save(path, nets, 0xDEADBEEFCAFEF00DULL, 321);

    const checkpoint::LoadedCheckpoint loaded = checkpoint::load(path);
    CHECK(loaded.config_hash == 0xDEADBEEFCAFEF00DULL);
    CHECK(loaded.episode == 321);

    REQUIRE(loaded.nets.actor.layer_count() == nets.actor.layer_count());
    for (std::size_t l = 0; l < nets.actor.layer_count(); ++l) {
        CHECK(loaded.nets.actor.weights[l].data == nets.actor.weights[l].data);  // exact doubles
        CHECK(loaded.nets.actor.biases[l] == nets.actor.biases[l]);
    }
    for (std::size_t l = 0; l < nets.critic.layer_count(); ++l) {
        CHECK(loaded.nets.critic.weights[l].data == nets.critic.weights[l].data);
        CHECK(loaded.nets.critic.biases[l] == nets.critic.biases[l]);
    }

    // forward passes agree exactly on the same input
    const std::vector<double> obs(7, 0.37);
    const std::vector<double> p1 = nets.policy(obs);
    const std::vector<double> p2 = loaded.nets.policy(obs);
    for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p1[i] == p2[i]);
    CHECK(nets.value(obs) == loaded.nets.value(obs));

    std::filesystem::remove(path);
}

TEST_CASE("corrupted files are rejected") {
    const std::string path = temp_path("bg_ckpt_tamper.bgcp");
    const ppo::ActorCritic nets = sample_nets();
    checkpoint::save(path, nets, 7, 1);

    SUBCASE("tampered shape header") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        // first tensor's row count sits right after magic+version+hash+episode
        // +tensor_count+actor_count = 4+4+8+8+4+4 = 32 bytes
        f.seekp(32);
        const std::uint32_t bogus = 0xFFFFFFFF;
        f.write(reinterpret_cast<const char*>(&bogus), sizeof(bogus));
        f.close();
        CHECK_THROWS_AS(checkpoint::load(path), DomainError);
    }

    SUBCASE("bad magic") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("NOPE", 4);
        f.close();
        CHECK_THROWS_AS(checkpoint::load(path), DomainError);
    }

    SUBCASE("truncation") {
        std::error_code ec;
        std::filesystem::resize_file(path, 100, ec);
        REQUIRE_FALSE(ec);
        CHECK_THROWS_AS(checkpoint::load(path), DomainError);
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(checkpoint::load(temp_path("bg_ckpt_missing.bgcp")), IoError);
    }

    std::filesystem::remove(path);
}

TEST_CASE("config hash survives the round trip for mismatch warnings") {
    const std::string path = temp_path("bg_ckpt_hash.bgcp");
    checkpoint::save(path, sample_nets(), 1111, 0);
    const checkpoint::LoadedCheckpoint loaded = checkpoint::load(path);
    CHECK(loaded.config_hash == 1111);
    CHECK(loaded.config_hash != 2222);  // a different config would flag this
    std::filesystem::remove(path);
}
