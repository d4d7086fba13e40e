// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "curio/demos.hpp"
#include "curio/mlp.hpp"
#include "curio/policy.hpp"

namespace curio {

struct StepRecord {
    Eigen::VectorXd obs;
    Eigen::VectorXd action;  // unclipped sample
    double extrinsic = 0.0;
    double curiosity = 0.0;
    double combined = 0.0;  // extrinsic + eta * curiosity
    double log_prob = 0.0;
};

struct Trajectory {
    std::vector<StepRecord> steps;

    long size() const { return static_cast<long>(steps.size()); }
    double extrinsic_return() const;
    double combined_return() const;
};

/// Returns-to-go G_t = sum_{k>=t} gamma^{k-t} r_k over the combined rewards.
Eigen::VectorXd discounted_returns(const std::vector<double>& rewards, double gamma);
Eigen::VectorXd discounted_returns(const Trajectory& traj, double gamma);

struct ReinforceConfig {
    double gamma = 0.99;
    double learning_rate = 3e-3;
    int batch_episodes = 10;
    bool standardize_returns = true;
};

struct UpdateDiagnostics {
    double mean_extrinsic_return = 0.0;
    double mean_curiosity = 0.0;  // raw per-step curiosity across the batch
    double grad_norm = 0.0;
};

/// Gradient (ascent direction) of the surrogate
///   J = sum over steps of log pi(a_t | o_t) * advantage_t
/// w.r.t. the flat policy parameters. Advantages are per trajectory,
/// one entry per step.
Eigen::VectorXd policy_gradient(const GaussianPolicy& pol, const std::vector<Trajectory>& batch,
                                const std::vector<Eigen::VectorXd>& advantages);

/// Advantages exactly as the update uses them: returns-to-go minus the batch
/// mean, optionally standardized to unit variance.
std::vector<Eigen::VectorXd> compute_advantages(const std::vector<Trajectory>& batch,
                                                const ReinforceConfig& cfg);

/// One gradient ascent step on the surrogate. Aborts with a diagnostic on a
/// non-finite gradient.
UpdateDiagnostics reinforce_update(GaussianPolicy& pol, Adam& opt,
                                   const std::vector<Trajectory>& batch,
                                   const ReinforceConfig& cfg);

struct BcConfig {
    int epochs = 100;
    int minibatch_size = 64;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
};

/// Behavior cloning: regress the policy mean network onto demo actions with
/// Adam on the mean squared error. log_std is untouched.
void pretrain_bc(GaussianPolicy& pol, const DemoSet& demos, const BcConfig& cfg);

/// Episode-driven learner interface so other policy-gradient algorithms can
/// slot in behind the experiment harness.
class Algorithm {
public:
    virtual ~Algorithm() = default;
    virtual GaussianPolicy& policy() = 0;
    virtual const GaussianPolicy& policy() const = 0;
    /// Feed one finished episode; returns diagnostics when an update ran.
    virtual std::optional<UpdateDiagnostics> on_episode(Trajectory&& traj) = 0;
};

class ReinforceAlgorithm final : public Algorithm {
public:
    ReinforceAlgorithm(GaussianPolicy policy, const ReinforceConfig& cfg);

    GaussianPolicy& policy() override { return policy_; }
    const GaussianPolicy& policy() const override { return policy_; }
    std::optional<UpdateDiagnostics> on_episode(Trajectory&& traj) override;

private:
    GaussianPolicy policy_;
    ReinforceConfig cfg_;
    Adam opt_;
    std::vector<Trajectory> buffer_;
};

std::unique_ptr<Algorithm> make_algorithm(const std::string& id, GaussianPolicy policy,
                                          const ReinforceConfig& cfg);

}  // namespace curio
