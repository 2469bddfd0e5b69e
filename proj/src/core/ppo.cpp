// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/errors.hpp"

namespace beamguard::ppo {

void PpoConfig::validate() const {
    if (gamma <= 0.0 || gamma > 1.0) throw ConfigError("ppo: gamma must be in (0, 1]");
    if (gae_lambda < 0.0 || gae_lambda > 1.0) throw ConfigError("ppo: gae_lambda must be in [0, 1]");
    if (clip_epsilon <= 0.0) throw ConfigError("ppo: clip_epsilon must be positive");
    if (actor_lr <= 0.0 || critic_lr <= 0.0) throw ConfigError("ppo: learning rates must be positive");
    if (epochs == 0) throw ConfigError("ppo: epochs must be positive");
    if (batch_size == 0 || minibatch_size == 0 || minibatch_size > batch_size)
        throw ConfigError("ppo: need 0 < minibatch_size <= batch_size");
    if (reward_scale <= 0.0) throw ConfigError("ppo: reward_scale must be positive");
    if (entropy_coef < 0.0) throw ConfigError("ppo: entropy_coef must be non-negative");
    if (hidden_sizes.empty()) throw ConfigError("ppo: hidden_sizes must not be empty");
}

void RolloutBuffer::clear() {
    observations.clear();
    actions.clear();
    log_probs.clear();
    rewards.clear();
    values.clear();
    dones.clear();
    overrides.clear();
    bootstrap_value = 0.0;
}

void RolloutBuffer::push(const env::Observation& obs, int action, double log_prob, double reward,
                         double value, bool done, bool overridden) {
    observations.push_back(obs.values);
    actions.push_back(action);
    log_probs.push_back(log_prob);
    rewards.push_back(reward);
    values.push_back(value);
    dones.push_back(done ? 1 : 0);
    overrides.push_back(overridden ? 1 : 0);
}

GaeResult gae(std::span<const double> rewards, std::span<const double> values,
              double bootstrap_value, std::span<const std::uint8_t> dones, double gamma,
              double lambda) {
    const std::size_t n = rewards.size();
    if (values.size() != n || dones.size() != n)
        throw DomainError("gae: sequence length mismatch");

    GaeResult result;
    result.advantages.assign(n, 0.0);
    result.returns.assign(n, 0.0);

    double next_advantage = 0.0;
    for (std::size_t t = n; t-- > 0;) {
        const double not_done = dones[t] ? 0.0 : 1.0;
        const double next_value = (t + 1 < n) ? values[t + 1] : bootstrap_value;
        const double delta = rewards[t] + gamma * next_value * not_done - values[t];
        next_advantage = delta + gamma * lambda * not_done * next_advantage;
        result.advantages[t] = next_advantage;
        result.returns[t] = next_advantage + values[t];
    }
    return result;
}

ActorCritic ActorCritic::create(const PpoConfig& cfg, std::uint64_t master_seed) {
    std::vector<std::size_t> actor_sizes{env::kObservationDim};
    actor_sizes.insert(actor_sizes.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
    actor_sizes.push_back(env::kActionCount);
    std::vector<std::size_t> critic_sizes{env::kObservationDim};
    critic_sizes.insert(critic_sizes.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
    critic_sizes.push_back(1);

    ActorCritic nets;
    nets.actor = nn::make_network(actor_sizes);
    nets.critic = nn::make_network(critic_sizes);

    // Near-uniform initial policy (0.01 output gain), unit-gain critic head.
    Rng actor_rng = make_rng(master_seed, RngStream::kNetworkInit, 0);
    Rng critic_rng = make_rng(master_seed, RngStream::kNetworkInit, 1);
    nn::orthogonal_init(nets.actor, std::sqrt(2.0), 0.01, actor_rng);
    nn::orthogonal_init(nets.critic, std::sqrt(2.0), 1.0, critic_rng);
    return nets;
}

std::vector<double> ActorCritic::policy(std::span<const double> observation) const {
    std::vector<double> logits = nn::forward_one(actor, observation);
    nn::softmax_inplace(logits);
    return logits;
}

double ActorCritic::value(std::span<const double> observation) const {
    return nn::forward_one(critic, observation)[0];
}

std::pair<int, double> sample_action(std::span<const double> probabilities, Rng& rng) {
    if (probabilities.empty()) throw DomainError("sample_action: empty distribution");
    double sum = 0.0;
    for (const double p : probabilities) {
        if (!std::isfinite(p) || p < 0.0)
            throw DomainError("sample_action: degenerate distribution");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw DomainError("sample_action: probabilities do not sum to 1");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng) * sum;
    double cumulative = 0.0;
    int chosen = -1;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        cumulative += probabilities[i];
        if (u < cumulative) {
            chosen = static_cast<int>(i);
            break;
        }
    }
    if (chosen < 0) {
        // Float round-off at the top of the CDF: take the last non-zero entry.
        for (std::size_t i = probabilities.size(); i-- > 0;) {
            if (probabilities[i] > 0.0) {
                chosen = static_cast<int>(i);
                break;
            }
        }
    }
    const double p = std::max(probabilities[static_cast<std::size_t>(chosen)], 1e-300);
    return {chosen, std::log(p)};
}

int greedy_action(std::span<const double> probabilities) {
    if (probabilities.empty()) throw DomainError("greedy_action: empty distribution");
    std::size_t best = 0;
    for (std::size_t i = 1; i < probabilities.size(); ++i)
        if (probabilities[i] > probabilities[best]) best = i;
    return static_cast<int>(best);
}

ActorLossInfo actor_loss(const nn::NetworkParams& actor, const PpoConfig& cfg,
                         const MinibatchData& mb, nn::Gradients* grads_out) {
    const std::size_t m = mb.size;
    const std::size_t n_actions = actor.output_dim();

    std::size_t policy_samples = 0;
    const bool on_policy_overrides = cfg.override_handling == OverrideHandling::kTreatAsOnPolicy;
    for (std::size_t i = 0; i < m; ++i)
        if (on_policy_overrides || !mb.overrides[i]) ++policy_samples;

    ActorLossInfo info;
    info.policy_samples = policy_samples;
    if (policy_samples == 0) return info;

    nn::ForwardCache cache;
    nn::forward(actor, mb.observations, m, cache);
    const auto& logits = cache.activations.back();

    std::vector<double> probs(logits);
    for (std::size_t i = 0; i < m; ++i)
        nn::softmax_inplace(std::span<double>(probs.data() + i * n_actions, n_actions));

    std::vector<double> d_logits;
    if (grads_out) d_logits.assign(m * n_actions, 0.0);

    const double inv = 1.0 / static_cast<double>(policy_samples);
    double surrogate_sum = 0.0;
    double entropy_sum = 0.0;
    std::size_t clipped = 0;

    for (std::size_t i = 0; i < m; ++i) {
        if (!on_policy_overrides && mb.overrides[i]) continue;
        const double* p = probs.data() + i * n_actions;
        const int a = mb.actions[i];
        const double advantage = mb.advantages[i];

        const double log_p = std::log(std::max(p[a], 1e-300));
        const double ratio = std::exp(log_p - mb.old_log_probs[i]);
        const double clipped_ratio =
            std::clamp(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon);
        const double surrogate = std::min(ratio * advantage, clipped_ratio * advantage);
        surrogate_sum += surrogate;

        double entropy = 0.0;
        for (std::size_t j = 0; j < n_actions; ++j)
            if (p[j] > 0.0) entropy -= p[j] * std::log(p[j]);
        entropy_sum += entropy;

        // The clipped branch has zero gradient once the ratio leaves the
        // trust region on the "wrong" side for this advantage's sign.
        const bool clip_binding = (advantage > 0.0 && ratio > 1.0 + cfg.clip_epsilon) ||
                                  (advantage < 0.0 && ratio < 1.0 - cfg.clip_epsilon);
        if (clip_binding) ++clipped;

        if (grads_out) {
            double* dz = d_logits.data() + i * n_actions;
            for (std::size_t j = 0; j < n_actions; ++j) {
                const double indicator = (static_cast<int>(j) == a) ? 1.0 : 0.0;
                double g = 0.0;
                if (!clip_binding)
                    g -= inv * advantage * ratio * (indicator - p[j]);
                if (cfg.entropy_coef > 0.0 && p[j] > 0.0)
                    g += inv * cfg.entropy_coef * p[j] * (std::log(p[j]) + entropy);
                dz[j] = g;
            }
        }
    }

    info.loss = -surrogate_sum * inv - cfg.entropy_coef * entropy_sum * inv;
    info.entropy = entropy_sum * inv;
    info.clip_fraction = static_cast<double>(clipped) / static_cast<double>(policy_samples);

    if (grads_out) nn::backward(actor, cache, d_logits, *grads_out);
    return info;
}

CriticLossInfo critic_loss(const nn::NetworkParams& critic, const MinibatchData& mb,
                           nn::Gradients* grads_out) {
    const std::size_t m = mb.size;
    nn::ForwardCache cache;
    nn::forward(critic, mb.observations, m, cache);
    const auto& v = cache.activations.back();

    double loss = 0.0;
    std::vector<double> d_v;
    if (grads_out) d_v.assign(m, 0.0);
    const double inv = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double err = v[i] - mb.returns[i];
        loss += err * err * inv;
        if (grads_out) d_v[i] = 2.0 * err * inv;
    }
    if (grads_out) nn::backward(critic, cache, d_v, *grads_out);
    return CriticLossInfo{loss};
}

PpoLearner::PpoLearner(PpoConfig cfg, std::uint64_t master_seed)
    : cfg_(std::move(cfg)),
      master_seed_(master_seed),
      nets_(ActorCritic::create(cfg_, master_seed)),
      actor_opt_(cfg_.actor_lr, cfg_.adam_beta1, cfg_.adam_beta2, cfg_.adam_epsilon),
      critic_opt_(cfg_.critic_lr, cfg_.adam_beta1, cfg_.adam_beta2, cfg_.adam_epsilon) {
    cfg_.validate();
}

UpdateDiagnostics PpoLearner::update(const RolloutBuffer& buffer) {
    const std::size_t n = buffer.size();
    if (n == 0) throw DomainError("ppo_update: empty rollout buffer");

    GaeResult estimates = gae(buffer.rewards, buffer.values, buffer.bootstrap_value, buffer.dones,
                              cfg_.gamma, cfg_.gae_lambda);

    if (cfg_.normalize_advantages) {
        double mean = 0.0;
        for (const double a : estimates.advantages) mean += a;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const double a : estimates.advantages) var += (a - mean) * (a - mean);
        var /= static_cast<double>(n);
        const double inv_std = 1.0 / (std::sqrt(var) + 1e-8);
        for (double& a : estimates.advantages) a = (a - mean) * inv_std;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    nn::Gradients actor_grads = nn::make_gradients(nets_.actor);
    nn::Gradients critic_grads = nn::make_gradients(nets_.critic);
    MinibatchData mb;

    UpdateDiagnostics diag;
    const std::size_t obs_dim = env::kObservationDim;

    for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
        // Shuffle order reseeded per epoch from the master seed.
        Rng shuffle_rng =
            make_rng(master_seed_, RngStream::kShuffle, updates_done_ * 1000 + epoch);
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        const bool last_epoch = (epoch + 1 == cfg_.epochs);
        double epoch_actor_loss = 0.0, epoch_critic_loss = 0.0, epoch_entropy = 0.0;
        double epoch_clip = 0.0;
        std::size_t epoch_policy_samples = 0, minibatches = 0;

        for (std::size_t start = 0; start < n; start += cfg_.minibatch_size) {
            const std::size_t m = std::min(cfg_.minibatch_size, n - start);
            mb.size = m;
            mb.observations.assign(m * obs_dim, 0.0);
            mb.actions.resize(m);
            mb.old_log_probs.resize(m);
            mb.advantages.resize(m);
            mb.returns.resize(m);
            mb.overrides.resize(m);
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t src = order[start + i];
                std::copy(buffer.observations[src].begin(), buffer.observations[src].end(),
                          mb.observations.begin() + i * obs_dim);
                mb.actions[i] = buffer.actions[src];
                mb.old_log_probs[i] = buffer.log_probs[src];
                mb.advantages[i] = estimates.advantages[src];
                mb.returns[i] = estimates.returns[src];
                mb.overrides[i] = buffer.overrides[src];
            }

            actor_grads.zero();
            const ActorLossInfo a_info = actor_loss(nets_.actor, cfg_, mb, &actor_grads);
            if (a_info.policy_samples > 0) {
                if (cfg_.grad_clip_norm > 0.0) {
                    const double norm = nn::global_grad_norm(actor_grads);
                    if (norm > cfg_.grad_clip_norm)
                        nn::scale_gradients(actor_grads, cfg_.grad_clip_norm / norm);
                }
                actor_opt_.step(nets_.actor, actor_grads);
            }

            critic_grads.zero();
            const CriticLossInfo c_info = critic_loss(nets_.critic, mb, &critic_grads);
            if (cfg_.grad_clip_norm > 0.0) {
                const double norm = nn::global_grad_norm(critic_grads);
                if (norm > cfg_.grad_clip_norm)
                    nn::scale_gradients(critic_grads, cfg_.grad_clip_norm / norm);
            }
            critic_opt_.step(nets_.critic, critic_grads);

            if (last_epoch) {
                epoch_actor_loss += a_info.loss;
                epoch_critic_loss += c_info.loss;
                epoch_entropy += a_info.entropy;
                epoch_clip += a_info.clip_fraction;
                epoch_policy_samples += a_info.policy_samples;
                ++minibatches;
            }
        }

        if (last_epoch && minibatches > 0) {
            const double inv_mb = 1.0 / static_cast<double>(minibatches);
            diag.actor_loss = epoch_actor_loss * inv_mb;
            diag.critic_loss = epoch_critic_loss * inv_mb;
            diag.entropy = epoch_entropy * inv_mb;
            diag.clip_fraction = epoch_clip * inv_mb;
            diag.policy_samples = epoch_policy_samples;
        }
    }

    diag.finite = std::isfinite(diag.actor_loss) && std::isfinite(diag.critic_loss);
    ++updates_done_;
    return diag;
}

}  // namespace beamguard::ppo
