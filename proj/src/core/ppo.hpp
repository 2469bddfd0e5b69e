// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "core/environment.hpp"
#include "core/mlp.hpp"
#include "core/rng.hpp"

namespace beamguard::ppo {

/// How curriculum-forced steps enter the PPO update. The forced "action" is
/// an absolute beam override the policy could never have emitted, so by
/// default those samples feed the critic (rewards/value targets) but are
/// masked out of the clipped-ratio policy loss.
enum class OverrideHandling {
    kExclude,
    kTreatAsOnPolicy,
};

struct PpoConfig {
    double actor_lr = 3e-4;
    double critic_lr = 1e-3;
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double clip_epsilon = 0.2;
    std::size_t epochs = 40;
    std::size_t batch_size = 4096;
    std::size_t minibatch_size = 256;
    double entropy_coef = 0.01;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double grad_clip_norm = 0.5;
    // Rewards are divided by this inside the learner so critic targets stay
    // O(1); metrics and traces always report unscaled rewards.
    double reward_scale = 100.0;
    bool normalize_advantages = true;
    OverrideHandling override_handling = OverrideHandling::kExclude;
    std::vector<std::size_t> hidden_sizes = {256, 128};

    void validate() const;
};

/// On-policy experience between updates. Flushed (consumed) batch-by-batch.
struct RolloutBuffer {
    std::vector<std::array<double, env::kObservationDim>> observations;
    std::vector<int> actions;
    std::vector<double> log_probs;
    std::vector<double> rewards;  // already divided by reward_scale
    std::vector<double> values;
    std::vector<std::uint8_t> dones;
    std::vector<std::uint8_t> overrides;
    // Value estimate just past the final stored transition; used by GAE when
    // the batch ends mid-episode.
    double bootstrap_value = 0.0;

    std::size_t size() const { return actions.size(); }
    bool empty() const { return actions.empty(); }
    void clear();
    void push(const env::Observation& obs, int action, double log_prob, double reward,
              double value, bool done, bool overridden);
};

struct GaeResult {
    std::vector<double> advantages;
    std::vector<double> returns;
};

/// Generalized advantage estimation over one contiguous batch:
///   delta_t = r_t + gamma * V_{t+1} * (1 - done_t) - V_t
///   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
/// with V just past the end supplied by bootstrap_value. returns = A + V.
GaeResult gae(std::span<const double> rewards, std::span<const double> values,
              double bootstrap_value, std::span<const std::uint8_t> dones, double gamma,
              double lambda);

/// Actor (obs -> 5 softmax probabilities) and critic (obs -> scalar value).
struct ActorCritic {
    nn::NetworkParams actor;
    nn::NetworkParams critic;

    static ActorCritic create(const PpoConfig& cfg, std::uint64_t master_seed);

    /// Softmax policy over the discrete actions. Throws on non-finite input.
    std::vector<double> policy(std::span<const double> observation) const;

    /// State-value estimate. Throws on non-finite input.
    double value(std::span<const double> observation) const;
};

/// Draws an action from a probability vector; returns (index, log prob).
/// Throws DomainError on NaN/degenerate distributions.
std::pair<int, double> sample_action(std::span<const double> probabilities, Rng& rng);

int greedy_action(std::span<const double> probabilities);

struct UpdateDiagnostics {
    double actor_loss = 0.0;    // last-epoch mean surrogate + entropy term
    double critic_loss = 0.0;   // last-epoch mean squared error
    double entropy = 0.0;       // last-epoch mean policy entropy
    double clip_fraction = 0.0;
    std::size_t policy_samples = 0;  // non-override transitions in the batch
    bool finite = true;
};

/// One gathered minibatch, observations flattened row-major.
struct MinibatchData {
    std::size_t size = 0;
    std::vector<double> observations;
    std::vector<int> actions;
    std::vector<double> old_log_probs;
    std::vector<double> advantages;
    std::vector<double> returns;
    std::vector<std::uint8_t> overrides;
};

struct ActorLossInfo {
    double loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
    std::size_t policy_samples = 0;
};

struct CriticLossInfo {
    double loss = 0.0;
};

/// Clipped-surrogate actor loss (minus the entropy bonus) over a minibatch,
/// averaged across policy samples. When grads_out is non-null the analytic
/// gradient is accumulated into it.
ActorLossInfo actor_loss(const nn::NetworkParams& actor, const PpoConfig& cfg,
                         const MinibatchData& mb, nn::Gradients* grads_out);

/// Mean squared error of the value head against the computed returns.
CriticLossInfo critic_loss(const nn::NetworkParams& critic, const MinibatchData& mb,
                           nn::Gradients* grads_out);

/// Clipped-surrogate PPO with separate Adam optimizers per network.
class PpoLearner {
public:
    PpoLearner(PpoConfig cfg, std::uint64_t master_seed);

    /// One full update (epochs x minibatches) on a batch-sized buffer.
    /// Throws DomainError when the buffer is empty.
    UpdateDiagnostics update(const RolloutBuffer& buffer);

    ActorCritic& nets() { return nets_; }
    const ActorCritic& nets() const { return nets_; }
    const PpoConfig& config() const { return cfg_; }
    std::size_t updates_done() const { return updates_done_; }

private:
    PpoConfig cfg_;
    std::uint64_t master_seed_;
    ActorCritic nets_;
    nn::AdamOptimizer actor_opt_;
    nn::AdamOptimizer critic_opt_;
    std::size_t updates_done_ = 0;
};

}  // namespace beamguard::ppo
