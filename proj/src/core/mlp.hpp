// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The beamguard authors

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "core/rng.hpp"

namespace beamguard::nn {

/// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Fully connected ReLU network parameters: weights[l] is (sizes[l+1] x
/// sizes[l]), biases[l] has sizes[l+1] entries. The output layer is linear;
/// heads (softmax, scalar value) live with the callers.
struct NetworkParams {
    std::vector<std::size_t> sizes;  // e.g. {7, 256, 128, 5}
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::size_t layer_count() const { return weights.size(); }
    std::size_t input_dim() const { return sizes.front(); }
    std::size_t output_dim() const { return sizes.back(); }
    std::size_t parameter_count() const;
};

NetworkParams make_network(const std::vector<std::size_t>& sizes);

/// Orthogonal init: hidden layers scaled by hidden_gain (sqrt(2) for ReLU),
/// output layer by output_gain. Biases start at zero.
void orthogonal_init(NetworkParams& params, double hidden_gain, double output_gain, Rng& rng);

/// Gradients with the same shape as the parameters they differentiate.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    void zero();
};

Gradients make_gradients(const NetworkParams& params);

/// Post-activation values per layer for a batch, kept for backprop.
/// activations[0] is the input batch; activations[L] the linear output.
struct ForwardCache {
    std::size_t batch = 0;
    std::vector<std::vector<double>> activations;
};

/// Batched forward pass. `inputs` is row-major (batch x input_dim).
void forward(const NetworkParams& params, std::span<const double> inputs, std::size_t batch,
             ForwardCache& cache);

/// Single-sample convenience forward; returns the linear output row.
std::vector<double> forward_one(const NetworkParams& params, std::span<const double> input);

/// Backprop from d(loss)/d(output) rows (batch x output_dim), accumulating
/// into `grads` (callers zero them when starting a fresh batch).
void backward(const NetworkParams& params, const ForwardCache& cache,
              std::span<const double> d_output, Gradients& grads);

/// In-place softmax on one logit row (max-shifted for stability).
void softmax_inplace(std::span<double> logits);

double global_grad_norm(const Gradients& grads);
void scale_gradients(Gradients& grads, double factor);

/// Adam with bias correction; one state per network.
class AdamOptimizer {
public:
    AdamOptimizer(double lr, double beta1, double beta2, double epsilon);

    void step(NetworkParams& params, const Gradients& grads);
    double learning_rate() const { return lr_; }

private:
    double lr_, beta1_, beta2_, epsilon_;
    long long t_ = 0;
    std::vector<std::vector<double>> m_weights_, v_weights_;
    std::vector<std::vector<double>> m_biases_, v_biases_;
    bool initialized_ = false;
};

}  // namespace beamguard::nn
