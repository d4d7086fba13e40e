// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "curio/demos.hpp"
#include "curio/mlp.hpp"

namespace curio {

/// Per-dimension affine observation normalizer, frozen into the feature map.
struct Normalizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;  // floored away from zero

    static Normalizer identity(int dim);
    static Normalizer fit(const Eigen::MatrixXd& x);

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

/// Learned latent embedding: normalizer + tanh network, with a constant 1
/// appended to the network output so the regression always has an intercept.
/// Immutable after construction; the curiosity machinery only ever reads it.
class FeatureMap {
public:
    FeatureMap() = default;
    FeatureMap(Normalizer norm, Mlp net);

    static FeatureMap make_random(int input_dim, const std::vector<int>& hidden,
                                  int latent_dim, std::uint64_t seed);

    int input_dim() const { return net_.input_dim(); }
    int latent_dim() const { return net_.output_dim(); }
    int output_dim() const { return net_.output_dim() + 1; }  // + bias feature

    /// Forward pass; output has length latent_dim()+1 and ends in exactly 1.
    Eigen::VectorXd embed(const Eigen::VectorXd& obs) const;
    /// Row-wise batch embed.
    Eigen::MatrixXd embed(const Eigen::MatrixXd& obs) const;

    const Mlp& net() const { return net_; }
    Mlp& mutable_net() { return net_; }
    const Normalizer& normalizer() const { return norm_; }

    void save(std::ostream& out) const;
    void save(const std::string& path) const;
    static FeatureMap load(std::istream& in);
    static FeatureMap load(const std::string& path);

private:
    Normalizer norm_;
    Mlp net_;
};

struct EmbedTrainConfig {
    double subset_fraction = 0.25;  // fraction of demos used as the conditioning set per epoch
    int minibatch_size = 64;
    double learning_rate = 1e-3;
    double l2_weight = 1e-4;
    int max_epochs = 200;
    int convergence_window = 15;
    double convergence_tol = 1e-4;
    double alpha = 1e-4;
    double beta = 1e2;
    std::uint64_t seed = 0;
    std::vector<int> hidden = {32, 32};
    int latent_dim = 32;
    double init_weight_scale = 8.0;  // >1 saturates tanh units: localized features
    bool full_residual_weight = false;  // drop the 1/2 on the residual term

    void validate() const;
};

struct ConditionalMoments {
    Eigen::VectorXd mean;  // one entry per action head
    double variance;       // shared across heads
};

/// Predictive moments at x of a regression conditioned on E, built from a
/// fresh prior each call. K independent mean heads share one variance.
ConditionalMoments conditional_moments(const FeatureMap& fm, const DemoSet& conditioning,
                                       const Eigen::VectorXd& x, double alpha, double beta);

/// Mean over batch rows (summed over action heads) of the Gaussian negative
/// log-likelihood of the batch targets under conditional_moments.
double nll_loss(const FeatureMap& fm, const DemoSet& conditioning, const DemoSet& batch,
                double alpha, double beta, bool full_residual = false);

struct NllGradient {
    double loss;
    Eigen::VectorXd grad;  // w.r.t. the flattened network parameters
};

/// Exact reverse-mode gradient of nll_loss w.r.t. every network parameter,
/// including the dependence of the conditioned posterior on the parameters
/// through the conditioning set's features.
NllGradient nll_gradient(const FeatureMap& fm, const DemoSet& conditioning,
                         const DemoSet& batch, double alpha, double beta,
                         bool full_residual = false);

struct EmbedTrainResult {
    FeatureMap feature_map;
    std::vector<double> epoch_nll;  // mean minibatch NLL per epoch
    int epochs_run = 0;
};

/// Epoch loop: pick a conditioning subset, sweep shuffled minibatches with
/// Adam + l2, stop when the windowed mean NLL stops improving or at
/// max_epochs. The returned map is frozen (observations normalized with
/// DemoSet statistics baked in).
EmbedTrainResult train_embedding(const DemoSet& demos, const EmbedTrainConfig& cfg);

}  // namespace curio
