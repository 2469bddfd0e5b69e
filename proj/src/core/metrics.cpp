// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/errors.hpp"

namespace beamguard::metrics {

SummaryStats SummaryStats::compute(std::span<const double> values) {
    if (values.empty()) throw DomainError("SummaryStats: empty sample");

    SummaryStats s;
    double sum = 0.0;
    s.min = values[0];
    s.max = values[0];
    for (const double v : values) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(values.size());

    if (values.size() > 1) {
        double sq = 0.0;
        for (const double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    s.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return s;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

namespace {

std::string hash_hex(std::uint64_t hash) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace

CsvMetricsWriter::CsvMetricsWriter(const std::string& path, std::uint64_t config_hash,
                                   std::uint64_t seed)
    : out_(path, std::ios::trunc) {
    if (!out_) throw IoError("metrics: cannot open CSV for writing: " + path);
    out_ << "# config_hash=" << hash_hex(config_hash) << " seed=" << seed << "\n";
    out_ << "episode,phase,reward,detection_rate,mean_sinr_db,mean_effort,override_count\n";
    out_.flush();
}

void CsvMetricsWriter::append(const EpisodeMetrics& row) {
    out_ << row.episode << ',' << row.phase << ',' << format_fixed(row.cumulative_reward) << ','
         << format_fixed(row.detection_rate) << ',' << format_fixed(row.mean_sinr_db) << ','
         << format_fixed(row.mean_effort) << ',' << row.override_count << "\n";
    out_.flush();
    if (!out_) throw IoError("metrics: CSV write failed");
}

JsonlTraceWriter::JsonlTraceWriter(const std::string& path, std::uint64_t config_hash,
                                   std::uint64_t seed)
    : out_(path, std::ios::trunc) {
    if (!out_) throw IoError("metrics: cannot open trace for writing: " + path);
    out_ << "{\"config_hash\":\"" << hash_hex(config_hash) << "\",\"seed\":" << seed << "}\n";
    out_.flush();
}

void JsonlTraceWriter::append(std::size_t episode, std::size_t step_index, int action,
                              bool overridden, double sinr_db, double conf, double reward,
                              bool detection) {
    out_ << "{\"episode\":" << episode << ",\"step_index\":" << step_index
         << ",\"action\":" << action << ",\"override\":" << (overridden ? "true" : "false")
         << ",\"sinr_db\":" << format_fixed(sinr_db) << ",\"conf\":" << format_fixed(conf)
         << ",\"reward\":" << format_fixed(reward)
         << ",\"detection\":" << (detection ? "true" : "false") << "}\n";
    if (!out_) throw IoError("metrics: trace write failed");
}

double bootstrap_superiority(std::span<const double> a, std::span<const double> b,
                             std::size_t resamples, Rng& rng) {
    if (a.empty() || b.empty()) throw DomainError("bootstrap: empty sample");

    const bool paired = a.size() == b.size();
    std::uniform_int_distribution<std::size_t> pick_a(0, a.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_b(0, b.size() - 1);

    std::size_t wins = 0;
    for (std::size_t r = 0; r < resamples; ++r) {
        double sum_a = 0.0, sum_b = 0.0;
        if (paired) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                const std::size_t k = pick_a(rng);
                sum_a += a[k];
                sum_b += b[k];
            }
        } else {
            for (std::size_t i = 0; i < a.size(); ++i) sum_a += a[pick_a(rng)];
            for (std::size_t i = 0; i < b.size(); ++i) sum_b += b[pick_b(rng)];
        }
        const double mean_a = sum_a / static_cast<double>(a.size());
        const double mean_b = sum_b / static_cast<double>(b.size());
        if (mean_a > mean_b) ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(resamples);
}

}  // namespace beamguard::metrics
