// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

#include "curio/mlp.hpp"

namespace curio {

struct PolicyConfig {
    std::vector<int> hidden = {32, 32};
    double log_std_init = 0.0;
    double log_std_min = -10.0;
    double log_std_max = 2.0;
};

/// Diagonal Gaussian policy: a tanh network for the action mean plus one
/// learned log standard deviation per action dimension. Observations are
/// scaled to O(1) per dimension on the way in; the mean is the network's
/// tanh output scaled per dimension to the action bounds, so it can never
/// saturate past them and action noise stays live. Sampled actions are
/// returned unclipped; the caller clips before stepping the environment and
/// keeps the unclipped value for the log-probability.
class GaussianPolicy {
public:
    GaussianPolicy() = default;
    static GaussianPolicy make(int obs_dim, int action_dim, const PolicyConfig& cfg,
                               std::uint64_t seed,
                               const Eigen::VectorXd& action_scale = Eigen::VectorXd(),
                               const Eigen::VectorXd& obs_scale = Eigen::VectorXd());

    int obs_dim() const { return mean_net_.input_dim(); }
    int action_dim() const { return static_cast<int>(log_std_.size()); }

    Eigen::VectorXd mean(const Eigen::VectorXd& obs) const {
        const Eigen::VectorXd scaled = obs.cwiseProduct(obs_scale_);
        return action_scale_.cwiseProduct(mean_net_.forward(scaled));
    }
    const Eigen::VectorXd& action_scale() const { return action_scale_; }
    const Eigen::VectorXd& obs_scale() const { return obs_scale_; }
    const Eigen::VectorXd& log_std() const { return log_std_; }
    const Mlp& mean_net() const { return mean_net_; }
    Mlp& mutable_mean_net() { return mean_net_; }

    std::pair<Eigen::VectorXd, double> sample_action(const Eigen::VectorXd& obs,
                                                     std::mt19937_64& rng) const;
    double log_prob(const Eigen::VectorXd& obs, const Eigen::VectorXd& action) const;

    /// Flat parameter order: mean network, then log_std.
    int n_params() const { return mean_net_.n_params() + action_dim(); }
    Eigen::VectorXd flatten() const;
    /// Restores parameters; log_std entries are clamped to the config range.
    void unflatten(const Eigen::VectorXd& params);

    const PolicyConfig& config() const { return cfg_; }

    void save(std::ostream& out) const;
    static GaussianPolicy load(std::istream& in);

private:
    double log_prob_from_mean(const Eigen::VectorXd& mu, const Eigen::VectorXd& action) const;

    Mlp mean_net_;
    Eigen::VectorXd action_scale_;
    Eigen::VectorXd obs_scale_;
    Eigen::VectorXd log_std_;
    PolicyConfig cfg_;
};

}  // namespace curio
