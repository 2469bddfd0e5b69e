// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors
//
// Command-line front end for the beamguard library. Talks to the core only
// through the C API in beamguard.h.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "beamguard.h"

namespace {

int status_to_exit_code(bg_status status) {
    switch (status) {
        case BG_OK: return 0;
        case BG_ERROR_CONFIG: return 1;
        case BG_ERROR_COMPARE_ORDERING: return 3;
        case BG_ERROR_RUNTIME:
        case BG_ERROR_INVALID_ARGUMENT:
        default: return 2;
    }
}

int fail(bg_status status) {
    std::fprintf(stderr, "error (%s): %s\n", bg_status_name(status), bg_last_error());
    return status_to_exit_code(status);
}

struct ConfigDeleter {
    void operator()(bg_config* cfg) const { bg_config_destroy(cfg); }
};
using ConfigPtr = std::unique_ptr<bg_config, ConfigDeleter>;

struct CommonArgs {
    std::string config_path;
    std::string profile;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned workers = 0;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--profile", args.profile, "Config profile: paper or desk");
    cmd->add_option("--seed", args.seed, "Master seed (overrides the config)")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--out-dir", args.out_dir, "Output directory");
    cmd->add_option("--workers", args.workers, "Parallel rollout workers");
}

bg_status make_config(const CommonArgs& args, ConfigPtr& out) {
    bg_config* cfg = nullptr;
    bg_status status = bg_config_create(args.config_path.empty() ? nullptr : args.config_path.c_str(),
                                        args.profile.empty() ? nullptr : args.profile.c_str(), &cfg);
    if (status != BG_OK) return status;
    out.reset(cfg);
    if (args.seed_set) bg_config_set_seed(cfg, args.seed);
    if (args.workers > 0) bg_config_set_workers(cfg, args.workers);
    return BG_OK;
}

void print_progress(uint64_t episode, uint64_t total, const char* phase, double reward, void*) {
    if ((episode + 1) % 25 == 0 || episode + 1 == total) {
        std::printf("episode %5" PRIu64 "/%" PRIu64 "  phase=%-6s  reward=%10.1f\n", episode + 1,
                    total, phase, reward);
        std::fflush(stdout);
    }
}

void print_stats(const char* name, const bg_summary_stats& s) {
    std::printf("  %-18s mean=%9.3f  std=%9.3f  median=%9.3f  min=%9.3f  max=%9.3f\n", name,
                s.mean, s.stddev, s.median, s.min, s.max);
}

void print_eval_summary(const bg_eval_summary& s) {
    std::printf("evaluation over %" PRIu64 " episodes:\n", s.episodes);
    print_stats("sinr_db", s.sinr_db);
    print_stats("detection_rate", s.detection_rate);
    print_stats("reward", s.reward);
    std::printf("  episode-level detection (any step): %.4f\n", s.episode_any_detection_rate);
    std::printf("  mean effort: %.4f (near<75m: %.4f over %" PRIu64
                " steps, far: %.4f over %" PRIu64 " steps)\n",
                s.mean_effort, s.effort_near_mean, s.near_steps, s.effort_far_mean, s.far_steps);
    if (s.config_hash_mismatch)
        std::fprintf(stderr, "warning: checkpoint was written under a different config hash\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beamguard: mmWave ISAC beam-defense simulator and PPO trainer"};
    app.require_subcommand(1);

    CommonArgs train_args, eval_args, baseline_args, compare_args, inspect_args;
    std::string eval_checkpoint, compare_checkpoint;
    std::uint64_t eval_episodes = 0, baseline_episodes = 0;
    bool train_trace = false, eval_trace = false;
    bool eval_greedy = false, eval_sampled = false;

    CLI::App* train_cmd = app.add_subcommand("train", "Train the PPO agent with the curriculum");
    add_common_options(train_cmd, train_args);
    train_cmd->add_flag("--trace", train_trace, "Write a JSONL step trace");

    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint (curriculum off)");
    add_common_options(eval_cmd, eval_args);
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "Checkpoint file (omit: untrained agent)");
    eval_cmd->add_option("--episodes", eval_episodes, "Evaluation episodes (overrides config)");
    eval_cmd->add_flag("--greedy", eval_greedy, "Force greedy action selection");
    eval_cmd->add_flag("--sampled", eval_sampled, "Force sampled action selection");
    eval_cmd->add_flag("--trace", eval_trace, "Write a JSONL step trace");

    CLI::App* baseline_cmd =
        app.add_subcommand("baseline", "Run the SecBeam-style PDP baseline detector");
    add_common_options(baseline_cmd, baseline_args);
    baseline_cmd->add_option("--episodes", baseline_episodes, "Episodes (overrides config)");

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Agent vs baseline on paired scenarios");
    add_common_options(compare_cmd, compare_args);
    compare_cmd->add_option("--checkpoint", compare_checkpoint, "Agent checkpoint file")
        ->required();

    CLI::App* inspect_cmd = app.add_subcommand("inspect-config", "Print the resolved config JSON");
    add_common_options(inspect_cmd, inspect_args);

    CLI11_PARSE(app, argc, argv);

    if (train_cmd->parsed()) {
        ConfigPtr cfg;
        bg_status status = make_config(train_args, cfg);
        if (status != BG_OK) return fail(status);
        char* checkpoint_path = nullptr;
        status = bg_train(cfg.get(), train_args.out_dir.c_str(), train_trace ? 1 : 0,
                          print_progress, nullptr, &checkpoint_path);
        if (status != BG_OK) return fail(status);
        std::printf("training done; final checkpoint: %s\n", checkpoint_path);
        bg_string_free(checkpoint_path);
        return 0;
    }

    if (eval_cmd->parsed()) {
        ConfigPtr cfg;
        bg_status status = make_config(eval_args, cfg);
        if (status != BG_OK) return fail(status);
        bg_eval_summary summary{};
        const int greedy = eval_greedy ? 1 : (eval_sampled ? 0 : -1);
        status = bg_evaluate(cfg.get(), eval_checkpoint.empty() ? nullptr : eval_checkpoint.c_str(),
                             eval_args.out_dir.c_str(), greedy, eval_episodes, eval_trace ? 1 : 0,
                             &summary);
        if (status != BG_OK) return fail(status);
        print_eval_summary(summary);
        return 0;
    }

    if (baseline_cmd->parsed()) {
        ConfigPtr cfg;
        bg_status status = make_config(baseline_args, cfg);
        if (status != BG_OK) return fail(status);
        const std::string csv = baseline_args.out_dir + "/baseline_metrics.csv";
        bg_baseline_summary summary{};
        status = bg_run_baseline(cfg.get(), baseline_episodes, csv.c_str(), &summary);
        if (status != BG_OK) return fail(status);
        std::printf("baseline over %" PRIu64 " episodes:\n", summary.episodes);
        print_stats("sinr_db", summary.sinr_db);
        print_stats("detection_rate", summary.detection_rate);
        std::printf("  episode-level detection (any step): %.4f\n",
                    summary.episode_any_detection_rate);
        return 0;
    }

    if (compare_cmd->parsed()) {
        ConfigPtr cfg;
        bg_status status = make_config(compare_args, cfg);
        if (status != BG_OK) return fail(status);
        bg_compare_report report{};
        status = bg_compare(cfg.get(), compare_checkpoint.c_str(), compare_args.out_dir.c_str(),
                            &report);
        if (status != BG_OK && status != BG_ERROR_COMPARE_ORDERING) return fail(status);

        std::printf("paired comparison over %" PRIu64 " episodes:\n", report.episodes);
        std::printf("  detection rate (per-step): agent %.4f vs baseline %.4f\n",
                    report.agent_detection_mean, report.baseline_detection_mean);
        std::printf("  detection rate (per-episode, any step): agent %.4f vs baseline %.4f\n",
                    report.agent_episode_detection_rate, report.baseline_episode_detection_rate);
        std::printf("  mean SINR: agent %.2f dB vs baseline %.2f dB\n", report.agent_sinr_mean,
                    report.baseline_sinr_mean);
        std::printf("  ordering agent_detection > baseline_detection: %s (confidence %.3f)\n",
                    report.detection_ordering_confidence >= 0.95 ? "PASS" : "FAIL",
                    report.detection_ordering_confidence);
        std::printf("  ordering baseline_sinr > agent_sinr:           %s (confidence %.3f)\n",
                    report.sinr_ordering_confidence >= 0.95 ? "PASS" : "FAIL",
                    report.sinr_ordering_confidence);
        return status_to_exit_code(status);
    }

    if (inspect_cmd->parsed()) {
        ConfigPtr cfg;
        bg_status status = make_config(inspect_args, cfg);
        if (status != BG_OK) return fail(status);
        char* json = nullptr;
        status = bg_config_to_json(cfg.get(), &json);
        if (status != BG_OK) return fail(status);
        std::printf("%s\n", json);
        std::printf("config_hash: %016" PRIx64 "\n", bg_config_hash(cfg.get()));
        bg_string_free(json);
        return 0;
    }

    return 0;
}
