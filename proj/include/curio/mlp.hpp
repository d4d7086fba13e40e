// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <random>
#include <vector>

namespace curio {

enum class Activation { Tanh, Linear };

/// Small fully connected network, dense weights, batch rows as samples.
/// Hidden layers are tanh; the output activation is chosen at construction.
/// Backprop is hand-rolled: forward() fills a Tape with the per-layer
/// activations, backward() turns an output cotangent into parameter
/// gradients and (optionally) an input cotangent.
class Mlp {
public:
    struct Tape {
        std::vector<Eigen::MatrixXd> acts;  // acts[0] = input, acts[k] = layer k output
    };
    struct Grads {
        std::vector<Eigen::MatrixXd> w;
        std::vector<Eigen::VectorXd> b;

        void setZero();
        Eigen::VectorXd flatten() const;
    };

    Mlp() = default;
    /// Glorot-uniform weights scaled by weight_scale, zero biases. Scales
    /// above 1 push tanh units into saturation and make the features more
    /// localized.
    static Mlp make(int input_dim, const std::vector<int>& hidden, int output_dim,
                    Activation output_act, std::mt19937_64& rng, double weight_scale = 1.0);

    int input_dim() const { return w_.empty() ? 0 : static_cast<int>(w_.front().cols()); }
    int output_dim() const { return w_.empty() ? 0 : static_cast<int>(w_.back().rows()); }
    int n_layers() const { return static_cast<int>(w_.size()); }
    Activation output_activation() const { return output_act_; }
    const Eigen::MatrixXd& weights(int layer) const { return w_[layer]; }
    const Eigen::VectorXd& biases(int layer) const { return b_[layer]; }

    Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Tape& tape) const;

    /// Accumulates parameter gradients for d(loss)/d(output) = dout into
    /// grads and returns d(loss)/d(input).
    Eigen::MatrixXd backward(const Tape& tape, const Eigen::MatrixXd& dout, Grads& grads) const;

    Grads zero_grads() const;

    int n_params() const;
    Eigen::VectorXd flatten() const;
    void unflatten(const Eigen::VectorXd& params);

    /// True if every parameter is finite.
    bool finite() const;

    void save(std::ostream& out) const;
    static Mlp load(std::istream& in);

private:
    std::vector<Eigen::MatrixXd> w_;  // w_[k]: out_k x in_k
    std::vector<Eigen::VectorXd> b_;
    Activation output_act_ = Activation::Linear;
};

/// Adam with optional plain l2 penalty (lambda * theta added to the gradient).
class Adam {
public:
    Adam() = default;
    Adam(int n_params, double learning_rate, double l2_weight = 0.0);

    void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

    double learning_rate() const { return lr_; }

private:
    double lr_ = 1e-3;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    double l2_ = 0.0;
    long t_ = 0;
    Eigen::VectorXd m_;
    Eigen::VectorXd v_;
};

}  // namespace curio
