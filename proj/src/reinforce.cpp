// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/reinforce.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "curio/common.hpp"

namespace curio {

double Trajectory::extrinsic_return() const {
    double sum = 0.0;
    for (const auto& s : steps) sum += s.extrinsic;
    return sum;
}

double Trajectory::combined_return() const {
    double sum = 0.0;
    for (const auto& s : steps) sum += s.combined;
    return sum;
}

Eigen::VectorXd discounted_returns(const std::vector<double>& rewards, double gamma) {
    if (!(gamma > 0.0) || !(gamma < 1.0)) {
        throw std::invalid_argument("discounted_returns: gamma must be in (0, 1)");
    }
    Eigen::VectorXd g(static_cast<long>(rewards.size()));
    double acc = 0.0;
    for (long t = g.size() - 1; t >= 0; --t) {
        acc = rewards[static_cast<std::size_t>(t)] + gamma * acc;
        g[t] = acc;
    }
    return g;
}

Eigen::VectorXd discounted_returns(const Trajectory& traj, double gamma) {
    std::vector<double> rewards;
    rewards.reserve(traj.steps.size());
    for (const auto& s : traj.steps) rewards.push_back(s.combined);
    return discounted_returns(rewards, gamma);
}

std::vector<Eigen::VectorXd> compute_advantages(const std::vector<Trajectory>& batch,
                                                const ReinforceConfig& cfg) {
    std::vector<Eigen::VectorXd> advantages;
    advantages.reserve(batch.size());
    long total = 0;
    long t_max = 0;
    for (const auto& traj : batch) {
        advantages.push_back(discounted_returns(traj, cfg.gamma));
        total += advantages.back().size();
        t_max = std::max(t_max, advantages.back().size());
    }
    if (total == 0) throw std::invalid_argument("compute_advantages: empty batch");

    // Batch mean-return baseline, per timestep: the mean return-to-go across
    // the episodes still alive at t. Removes the time-remaining structure
    // that otherwise dominates the advantage variance.
    Eigen::VectorXd baseline_sum = Eigen::VectorXd::Zero(t_max);
    Eigen::VectorXd baseline_count = Eigen::VectorXd::Zero(t_max);
    for (const auto& g : advantages) {
        for (long t = 0; t < g.size(); ++t) {
            baseline_sum[t] += g[t];
            baseline_count[t] += 1.0;
        }
    }
    const Eigen::VectorXd baseline = baseline_sum.cwiseQuotient(baseline_count.cwiseMax(1.0));

    double sum = 0.0;
    for (auto& adv : advantages) {
        adv -= baseline.head(adv.size());
        sum += adv.sum();
    }
    if (cfg.standardize_returns) {
        const double mean = sum / static_cast<double>(total);
        double sq = 0.0;
        for (auto& adv : advantages) {
            adv.array() -= mean;
            sq += adv.squaredNorm();
        }
        const double std_dev = std::sqrt(sq / static_cast<double>(total));
        const double scale = 1.0 / (std_dev + 1e-8);
        for (auto& adv : advantages) adv *= scale;
    }
    return advantages;
}

Eigen::VectorXd policy_gradient(const GaussianPolicy& pol, const std::vector<Trajectory>& batch,
                                const std::vector<Eigen::VectorXd>& advantages) {
    if (batch.empty()) throw std::invalid_argument("policy_gradient: empty batch");
    if (advantages.size() != batch.size()) {
        throw std::invalid_argument("policy_gradient: advantage/batch size mismatch");
    }

    const Mlp& net = pol.mean_net();
    Mlp::Grads net_grads = net.zero_grads();
    Eigen::VectorXd log_std_grad = Eigen::VectorXd::Zero(pol.action_dim());
    const Eigen::ArrayXd var = (2.0 * pol.log_std().array()).exp();

    for (std::size_t e = 0; e < batch.size(); ++e) {
        const Trajectory& traj = batch[e];
        if (advantages[e].size() != traj.size()) {
            throw std::invalid_argument("policy_gradient: advantage length mismatch");
        }
        if (traj.size() == 0) continue;

        Eigen::MatrixXd obs(traj.size(), pol.obs_dim());
        Eigen::MatrixXd act(traj.size(), pol.action_dim());
        for (long t = 0; t < traj.size(); ++t) {
            obs.row(t) = traj.steps[static_cast<std::size_t>(t)].obs;
            act.row(t) = traj.steps[static_cast<std::size_t>(t)].action;
        }
        obs.array().rowwise() *= pol.obs_scale().transpose().array();

        Mlp::Tape tape;
        Eigen::MatrixXd mu = net.forward(obs, tape);
        mu.array().rowwise() *= pol.action_scale().transpose().array();
        const Eigen::MatrixXd diff = act - mu;  // a - mean(o)

        // d/dmean of log pi = (a - mean)/var; rows scaled by the advantage,
        // columns by the action scale (mean = scale * tanh output).
        Eigen::MatrixXd dmu = diff.array().rowwise() / var.transpose();
        dmu.array().colwise() *= advantages[e].array();
        dmu.array().rowwise() *= pol.action_scale().transpose().array();
        net.backward(tape, dmu, net_grads);

        // d/dlog_std of log pi = -1 + (a - mean)^2 / var.
        const Eigen::MatrixXd dls =
            (diff.array().square().rowwise() / var.transpose()) - 1.0;
        log_std_grad += dls.transpose() * advantages[e];
    }

    Eigen::VectorXd grad(pol.n_params());
    grad.head(net.n_params()) = net_grads.flatten();
    grad.tail(pol.action_dim()) = log_std_grad;
    return grad;
}

UpdateDiagnostics reinforce_update(GaussianPolicy& pol, Adam& opt,
                                   const std::vector<Trajectory>& batch,
                                   const ReinforceConfig& cfg) {
    if (batch.empty()) throw std::invalid_argument("reinforce_update: empty batch");

    const auto advantages = compute_advantages(batch, cfg);
    const Eigen::VectorXd ascent = policy_gradient(pol, batch, advantages);
    if (!ascent.allFinite()) {
        throw numerical_error("reinforce_update: non-finite policy gradient");
    }

    Eigen::VectorXd params = pol.flatten();
    Eigen::VectorXd descent = -ascent;  // Adam minimizes
    opt.step(params, descent);
    pol.unflatten(params);  // log_std clamp applied inside

    UpdateDiagnostics diag;
    long steps = 0;
    for (const auto& traj : batch) {
        diag.mean_extrinsic_return += traj.extrinsic_return();
        for (const auto& s : traj.steps) diag.mean_curiosity += s.curiosity;
        steps += traj.size();
    }
    diag.mean_extrinsic_return /= static_cast<double>(batch.size());
    diag.mean_curiosity /= static_cast<double>(std::max<long>(steps, 1));
    diag.grad_norm = ascent.norm();
    return diag;
}

void pretrain_bc(GaussianPolicy& pol, const DemoSet& demos, const BcConfig& cfg) {
    if (demos.rows() < 1) throw std::invalid_argument("pretrain_bc: empty demo set");
    if (demos.obs_dim() != pol.obs_dim() || demos.action_dim() != pol.action_dim()) {
        throw std::invalid_argument("pretrain_bc: demo dimensions do not match the policy");
    }

    Mlp& net = pol.mutable_mean_net();
    Eigen::VectorXd params = net.flatten();
    Adam opt(static_cast<int>(params.size()), cfg.learning_rate);
    std::mt19937_64 rng(cfg.seed);

    const long n = demos.rows();
    std::vector<long> indices(n);
    std::iota(indices.begin(), indices.end(), 0L);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(indices.begin(), indices.end(), rng);
        for (long at = 0; at < n; at += cfg.minibatch_size) {
            const long len = std::min<long>(cfg.minibatch_size, n - at);
            Eigen::MatrixXd x(len, demos.obs_dim());
            Eigen::MatrixXd t(len, demos.action_dim());
            for (long i = 0; i < len; ++i) {
                x.row(i) = demos.X.row(indices[static_cast<std::size_t>(at + i)]);
                t.row(i) = demos.T.row(indices[static_cast<std::size_t>(at + i)]);
            }
            x.array().rowwise() *= pol.obs_scale().transpose().array();
            Mlp::Tape tape;
            Eigen::MatrixXd pred = net.forward(x, tape);
            pred.array().rowwise() *= pol.action_scale().transpose().array();
            // MSE, averaged over rows; gradient 2*(pred - t)/len through the
            // action scaling.
            Eigen::MatrixXd dout = 2.0 * (pred - t) / static_cast<double>(len);
            dout.array().rowwise() *= pol.action_scale().transpose().array();
            Mlp::Grads grads = net.zero_grads();
            net.backward(tape, dout, grads);
            opt.step(params, grads.flatten());
            net.unflatten(params);
            if (!net.finite()) {
                throw numerical_error("pretrain_bc: non-finite parameters");
            }
        }
    }
}

ReinforceAlgorithm::ReinforceAlgorithm(GaussianPolicy policy, const ReinforceConfig& cfg)
    : policy_(std::move(policy)), cfg_(cfg),
      opt_(policy_.n_params(), cfg.learning_rate) {
    if (cfg_.batch_episodes < 1) {
        throw std::invalid_argument("ReinforceAlgorithm: batch_episodes must be >= 1");
    }
}

std::optional<UpdateDiagnostics> ReinforceAlgorithm::on_episode(Trajectory&& traj) {
    buffer_.push_back(std::move(traj));
    if (static_cast<int>(buffer_.size()) < cfg_.batch_episodes) {
        return std::nullopt;
    }
    UpdateDiagnostics diag = reinforce_update(policy_, opt_, buffer_, cfg_);
    buffer_.clear();
    return diag;
}

std::unique_ptr<Algorithm> make_algorithm(const std::string& id, GaussianPolicy policy,
                                          const ReinforceConfig& cfg) {
    if (id == "reinforce") {
        return std::make_unique<ReinforceAlgorithm>(std::move(policy), cfg);
    }
    throw std::invalid_argument("make_algorithm: unknown algorithm id '" + id + "'");
}

}  // namespace curio
