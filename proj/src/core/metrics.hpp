// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace beamguard::metrics {

struct EpisodeMetrics {
    std::size_t episode = 0;
    std::string phase;  // phase1 | phase2 | off | eval | baseline
    double cumulative_reward = 0.0;
    double detection_rate = 0.0;  // per-step fraction within the episode
    double mean_sinr_db = 0.0;
    double mean_effort = 0.0;
    std::size_t override_count = 0;
};

struct SummaryStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;

    static SummaryStats compute(std::span<const double> values);
};

/// Appends per-episode rows to the fixed CSV schema
///   episode,phase,reward,detection_rate,mean_sinr_db,mean_effort,override_count
/// after a `# config_hash=... seed=...` provenance comment and the header
/// row. Rows are flushed as they arrive so an interrupted run keeps its
/// progress. Numeric formatting is fixed 6-decimal, which is what makes
/// same-seed runs byte-identical.
class CsvMetricsWriter {
public:
    CsvMetricsWriter(const std::string& path, std::uint64_t config_hash, std::uint64_t seed);
    void append(const EpisodeMetrics& row);

private:
    std::ofstream out_;
};

/// One JSON object per step:
///   {"step_index":..,"action":..,"override":..,"sinr_db":..,"conf":..,
///    "reward":..,"detection":..}
/// preceded by a provenance line carrying config hash and seed.
class JsonlTraceWriter {
public:
    JsonlTraceWriter(const std::string& path, std::uint64_t config_hash, std::uint64_t seed);
    void append(std::size_t episode, std::size_t step_index, int action, bool overridden,
                double sinr_db, double conf, double reward, bool detection);

private:
    std::ofstream out_;
};

/// Paired bootstrap: resamples episode indices and returns the fraction of
/// resamples in which mean(a) > mean(b). Deterministic for a given rng.
double bootstrap_superiority(std::span<const double> a, std::span<const double> b,
                             std::size_t resamples, Rng& rng);

std::string format_fixed(double value, int decimals = 6);

}  // namespace beamguard::metrics
