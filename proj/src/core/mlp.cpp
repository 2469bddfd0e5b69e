// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#include "core/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace beamguard::nn {

std::size_t NetworkParams::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        n += weights[l].data.size() + biases[l].size();
    return n;
}

NetworkParams make_network(const std::vector<std::size_t>& sizes) {
    if (sizes.size() < 2) throw DomainError("make_network: need at least input and output sizes");
    NetworkParams params;
    params.sizes = sizes;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        params.weights.emplace_back(sizes[l + 1], sizes[l]);
        params.biases.emplace_back(sizes[l + 1], 0.0);
    }
    return params;
}

namespace {

// Orthogonal matrix via Gram-Schmidt on a Gaussian draw. Columns are
// orthonormalized twice; good to ~1e-12 which is all an init needs.
Matrix random_orthogonal(std::size_t rows, std::size_t cols, Rng& rng) {
    const std::size_t n = std::max(rows, cols);
    const std::size_t k = std::min(rows, cols);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // columns[j] is an n-vector
    std::vector<std::vector<double>> q(k, std::vector<double>(n));
    for (auto& col : q)
        for (auto& x : col) x = gauss(rng);

    for (std::size_t j = 0; j < k; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                double dot = 0.0;
                for (std::size_t r = 0; r < n; ++r) dot += q[i][r] * q[j][r];
                for (std::size_t r = 0; r < n; ++r) q[j][r] -= dot * q[i][r];
            }
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) norm += q[j][r] * q[j][r];
        norm = std::sqrt(norm);
        if (norm < 1e-12) throw DomainError("random_orthogonal: degenerate draw");
        for (std::size_t r = 0; r < n; ++r) q[j][r] /= norm;
    }

    Matrix result(rows, cols);
    if (rows >= cols) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) result.at(r, c) = q[c][r];
    } else {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) result.at(r, c) = q[r][c];
    }
    return result;
}

}  // namespace

void orthogonal_init(NetworkParams& params, double hidden_gain, double output_gain, Rng& rng) {
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        const bool output_layer = (l + 1 == params.layer_count());
        const double gain = output_layer ? output_gain : hidden_gain;
        Matrix w = random_orthogonal(params.weights[l].rows, params.weights[l].cols, rng);
        for (auto& x : w.data) x *= gain;
        params.weights[l] = std::move(w);
        std::fill(params.biases[l].begin(), params.biases[l].end(), 0.0);
    }
}

void Gradients::zero() {
    for (auto& w : weights) std::fill(w.data.begin(), w.data.end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

Gradients make_gradients(const NetworkParams& params) {
    Gradients g;
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        g.weights.emplace_back(params.weights[l].rows, params.weights[l].cols);
        g.biases.emplace_back(params.biases[l].size(), 0.0);
    }
    return g;
}

void forward(const NetworkParams& params, std::span<const double> inputs, std::size_t batch,
             ForwardCache& cache) {
    const std::size_t in_dim = params.input_dim();
    if (inputs.size() != batch * in_dim) throw DomainError("forward: input size mismatch");
    for (const double x : inputs)
        if (!std::isfinite(x)) throw DomainError("forward: non-finite input");

    const std::size_t n_layers = params.layer_count();
    cache.batch = batch;
    cache.activations.resize(n_layers + 1);
    cache.activations[0].assign(inputs.begin(), inputs.end());

    for (std::size_t l = 0; l < n_layers; ++l) {
        const Matrix& w = params.weights[l];
        const auto& b = params.biases[l];
        const auto& prev = cache.activations[l];
        auto& out = cache.activations[l + 1];
        out.assign(batch * w.rows, 0.0);
        const bool hidden = (l + 1 < n_layers);

        for (std::size_t i = 0; i < batch; ++i) {
            const double* x = prev.data() + i * w.cols;
            double* y = out.data() + i * w.rows;
            for (std::size_t j = 0; j < w.rows; ++j) {
                const double* wj = w.data.data() + j * w.cols;
                double acc = b[j];
                for (std::size_t c = 0; c < w.cols; ++c) acc += wj[c] * x[c];
                y[j] = hidden ? std::max(acc, 0.0) : acc;
            }
        }
    }
}

std::vector<double> forward_one(const NetworkParams& params, std::span<const double> input) {
    ForwardCache cache;
    forward(params, input, 1, cache);
    return cache.activations.back();
}

void backward(const NetworkParams& params, const ForwardCache& cache,
              std::span<const double> d_output, Gradients& grads) {
    const std::size_t n_layers = params.layer_count();
    const std::size_t batch = cache.batch;
    if (d_output.size() != batch * params.output_dim())
        throw DomainError("backward: output gradient size mismatch");

    std::vector<double> delta(d_output.begin(), d_output.end());
    std::vector<double> delta_prev;

    for (std::size_t l = n_layers; l-- > 0;) {
        const Matrix& w = params.weights[l];
        const auto& prev = cache.activations[l];
        auto& gw = grads.weights[l];
        auto& gb = grads.biases[l];

        for (std::size_t i = 0; i < batch; ++i) {
            const double* d = delta.data() + i * w.rows;
            const double* x = prev.data() + i * w.cols;
            for (std::size_t j = 0; j < w.rows; ++j) {
                const double dj = d[j];
                if (dj == 0.0) continue;
                gb[j] += dj;
                double* gwj = gw.data.data() + j * w.cols;
                for (std::size_t c = 0; c < w.cols; ++c) gwj[c] += dj * x[c];
            }
        }

        if (l == 0) break;

        // Propagate to the previous layer and gate through its ReLU.
        delta_prev.assign(batch * w.cols, 0.0);
        for (std::size_t i = 0; i < batch; ++i) {
            const double* d = delta.data() + i * w.rows;
            double* dp = delta_prev.data() + i * w.cols;
            for (std::size_t j = 0; j < w.rows; ++j) {
                const double dj = d[j];
                if (dj == 0.0) continue;
                const double* wj = w.data.data() + j * w.cols;
                for (std::size_t c = 0; c < w.cols; ++c) dp[c] += dj * wj[c];
            }
            const double* act = prev.data() + i * w.cols;
            for (std::size_t c = 0; c < w.cols; ++c)
                if (act[c] <= 0.0) dp[c] = 0.0;
        }
        delta.swap(delta_prev);
    }
}

void softmax_inplace(std::span<double> logits) {
    double max_logit = logits[0];
    for (const double z : logits) max_logit = std::max(max_logit, z);
    double sum = 0.0;
    for (double& z : logits) {
        z = std::exp(z - max_logit);
        sum += z;
    }
    for (double& z : logits) z /= sum;
}

double global_grad_norm(const Gradients& grads) {
    double sq = 0.0;
    for (const auto& w : grads.weights)
        for (const double g : w.data) sq += g * g;
    for (const auto& b : grads.biases)
        for (const double g : b) sq += g * g;
    return std::sqrt(sq);
}

void scale_gradients(Gradients& grads, double factor) {
    for (auto& w : grads.weights)
        for (double& g : w.data) g *= factor;
    for (auto& b : grads.biases)
        for (double& g : b) g *= factor;
}

AdamOptimizer::AdamOptimizer(double lr, double beta1, double beta2, double epsilon)
    : lr_(lr), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

void AdamOptimizer::step(NetworkParams& params, const Gradients& grads) {
    if (!initialized_) {
        for (std::size_t l = 0; l < params.layer_count(); ++l) {
            m_weights_.emplace_back(params.weights[l].data.size(), 0.0);
            v_weights_.emplace_back(params.weights[l].data.size(), 0.0);
            m_biases_.emplace_back(params.biases[l].size(), 0.0);
            v_biases_.emplace_back(params.biases[l].size(), 0.0);
        }
        initialized_ = true;
    }

    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));

    auto update = [&](double* p, const double* g, double* m, double* v, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            p[i] -= lr_ * m_hat / (std::sqrt(v_hat) + epsilon_);
        }
    };

    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        update(params.weights[l].data.data(), grads.weights[l].data.data(),
               m_weights_[l].data(), v_weights_[l].data(), params.weights[l].data.size());
        update(params.biases[l].data(), grads.biases[l].data(), m_biases_[l].data(),
               v_biases_[l].data(), params.biases[l].size());
    }
}

}  // namespace beamguard::nn
