// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "curio/blr.hpp"
#include "curio/embedding.hpp"

namespace curio {

/// Intrinsic-reward state: a frozen embedding plus a streaming variance-only
/// regression posterior over the latent space. Immutable value; absorbing an
/// episode returns a fresh state, so rewards inside an episode are always
/// evaluated against the pre-episode posterior.
class CuriosityState {
public:
    CuriosityState(std::shared_ptr<const FeatureMap> fm, BlrPosterior post, double eta);
    /// Fresh posterior from the prior (the reset that precedes RL).
    static CuriosityState fresh(std::shared_ptr<const FeatureMap> fm, double alpha, double beta,
                                double eta);

    const FeatureMap& feature_map() const { return *fm_; }
    std::shared_ptr<const FeatureMap> feature_map_ptr() const { return fm_; }
    const BlrPosterior& posterior() const { return post_; }
    double eta() const { return eta_; }
    double beta() const { return post_.beta(); }

    /// c = log(predictive variance at the embedded observation); bounded
    /// below by -log(beta). Pure.
    double curiosity_reward(const Eigen::VectorXd& obs) const;

    /// extrinsic + eta * curiosity_reward(obs).
    double combined_reward(double extrinsic, const Eigen::VectorXd& obs) const;

    /// One variance-only posterior update with the whole episode's stacked
    /// features. The sequence must be nonempty.
    CuriosityState absorb_episode(const std::vector<Eigen::VectorXd>& observations) const;

    /// Checkpoint bundle: feature map + posterior record + manifest with the
    /// scalars, all inside `dir`.
    void save(const std::string& dir) const;
    static CuriosityState load(const std::string& dir);

private:
    std::shared_ptr<const FeatureMap> fm_;
    BlrPosterior post_;
    double eta_;
};

}  // namespace curio
