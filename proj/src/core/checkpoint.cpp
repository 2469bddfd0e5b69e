// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "core/errors.hpp"

namespace beamguard::checkpoint {

namespace {

constexpr char kMagic[4] = {'B', 'G', 'C', 'P'};

void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw DomainError("checkpoint: truncated file");
    return v;
}

std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw DomainError("checkpoint: truncated file");
    return v;
}

void write_tensor(std::ostream& out, std::size_t rows, std::size_t cols, const double* data) {
    write_u32(out, static_cast<std::uint32_t>(rows));
    write_u32(out, static_cast<std::uint32_t>(cols));
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(rows * cols * sizeof(double)));
}

nn::Matrix read_tensor(std::istream& in) {
    const std::uint32_t rows = read_u32(in);
    const std::uint32_t cols = read_u32(in);
    // 64M entries is far beyond any network this project builds; a larger
    // header means a corrupt or tampered file.
    if (rows == 0 || cols == 0 || static_cast<std::uint64_t>(rows) * cols > (1u << 26))
        throw DomainError("checkpoint: implausible tensor shape");
    nn::Matrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!in) throw DomainError("checkpoint: truncated tensor data");
    return m;
}

void write_network(std::ostream& out, const nn::NetworkParams& net) {
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        write_tensor(out, net.weights[l].rows, net.weights[l].cols, net.weights[l].data.data());
        write_tensor(out, 1, net.biases[l].size(), net.biases[l].data());
    }
}

nn::NetworkParams read_network(std::istream& in, std::size_t tensor_count) {
    if (tensor_count == 0 || tensor_count % 2 != 0)
        throw DomainError("checkpoint: tensor count must pair weights with biases");

    nn::NetworkParams net;
    for (std::size_t t = 0; t < tensor_count; t += 2) {
        nn::Matrix w = read_tensor(in);
        nn::Matrix b = read_tensor(in);
        if (b.rows != 1 || b.cols != w.rows)
            throw DomainError("checkpoint: bias shape does not match its layer");
        if (!net.weights.empty() && w.cols != net.weights.back().rows)
            throw DomainError("checkpoint: layer shapes do not chain");
        if (net.weights.empty()) net.sizes.push_back(w.cols);
        net.sizes.push_back(w.rows);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(b.data.begin(), b.data.end());
    }
    return net;
}

}  // namespace

void save(const std::string& path, const ppo::ActorCritic& nets, std::uint64_t config_hash,
          std::uint64_t episode) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("checkpoint: cannot open for writing: " + path);

    out.write(kMagic, sizeof(kMagic));
    write_u32(out, kFormatVersion);
    write_u64(out, config_hash);
    write_u64(out, episode);

    const std::uint32_t tensor_count =
        static_cast<std::uint32_t>(2 * (nets.actor.layer_count() + nets.critic.layer_count()));
    write_u32(out, tensor_count);
    write_u32(out, static_cast<std::uint32_t>(2 * nets.actor.layer_count()));
    write_network(out, nets.actor);
    write_network(out, nets.critic);

    if (!out) throw IoError("checkpoint: write failed: " + path);
}

LoadedCheckpoint load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("checkpoint: cannot open: " + path);

    char magic[4] = {};
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DomainError("checkpoint: bad magic bytes");

    const std::uint32_t version = read_u32(in);
    if (version != kFormatVersion)
        throw DomainError("checkpoint: unsupported format version " + std::to_string(version));

    LoadedCheckpoint result;
    result.config_hash = read_u64(in);
    result.episode = read_u64(in);

    const std::uint32_t tensor_count = read_u32(in);
    const std::uint32_t actor_tensors = read_u32(in);
    if (actor_tensors == 0 || actor_tensors >= tensor_count)
        throw DomainError("checkpoint: inconsistent tensor partition");

    result.nets.actor = read_network(in, actor_tensors);
    result.nets.critic = read_network(in, tensor_count - actor_tensors);

    // Must be exactly at EOF now.
    char extra = 0;
    in.read(&extra, 1);
    if (!in.eof()) throw DomainError("checkpoint: trailing bytes after tensors");
    return result;
}

}  // namespace beamguard::checkpoint
