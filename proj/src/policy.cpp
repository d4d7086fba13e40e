// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/policy.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "curio/common.hpp"

namespace curio {

GaussianPolicy GaussianPolicy::make(int obs_dim, int action_dim, const PolicyConfig& cfg,
                                    std::uint64_t seed, const Eigen::VectorXd& action_scale,
                                    const Eigen::VectorXd& obs_scale) {
    if (action_dim < 1) throw std::invalid_argument("GaussianPolicy: action_dim must be >= 1");
    GaussianPolicy pol;
    pol.cfg_ = cfg;
    std::mt19937_64 rng(seed);
    pol.mean_net_ = Mlp::make(obs_dim, cfg.hidden, action_dim, Activation::Tanh, rng);
    if (action_scale.size() == 0) {
        pol.action_scale_ = Eigen::VectorXd::Ones(action_dim);
    } else if (action_scale.size() == action_dim && (action_scale.array() > 0.0).all()) {
        pol.action_scale_ = action_scale;
    } else {
        throw std::invalid_argument("GaussianPolicy: bad action_scale");
    }
    if (obs_scale.size() == 0) {
        pol.obs_scale_ = Eigen::VectorXd::Ones(obs_dim);
    } else if (obs_scale.size() == obs_dim && (obs_scale.array() > 0.0).all()) {
        pol.obs_scale_ = obs_scale;
    } else {
        throw std::invalid_argument("GaussianPolicy: bad obs_scale");
    }
    pol.log_std_ = Eigen::VectorXd::Constant(
        action_dim, std::clamp(cfg.log_std_init, cfg.log_std_min, cfg.log_std_max));
    return pol;
}

std::pair<Eigen::VectorXd, double> GaussianPolicy::sample_action(const Eigen::VectorXd& obs,
                                                                 std::mt19937_64& rng) const {
    const Eigen::VectorXd mu = mean(obs);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd action(action_dim());
    for (int j = 0; j < action_dim(); ++j) {
        action[j] = mu[j] + std::exp(log_std_[j]) * gauss(rng);
    }
    return {action, log_prob_from_mean(mu, action)};
}

double GaussianPolicy::log_prob(const Eigen::VectorXd& obs, const Eigen::VectorXd& action) const {
    return log_prob_from_mean(mean(obs), action);
}

double GaussianPolicy::log_prob_from_mean(const Eigen::VectorXd& mu,
                                          const Eigen::VectorXd& action) const {
    if (action.size() != action_dim()) {
        throw std::invalid_argument("GaussianPolicy: action has wrong dimension");
    }
    double lp = 0.0;
    for (int j = 0; j < action_dim(); ++j) {
        const double var = std::exp(2.0 * log_std_[j]);
        const double d = action[j] - mu[j];
        lp += -0.5 * std::log(2.0 * std::numbers::pi) - log_std_[j] - d * d / (2.0 * var);
    }
    return lp;
}

Eigen::VectorXd GaussianPolicy::flatten() const {
    Eigen::VectorXd out(n_params());
    out.head(mean_net_.n_params()) = mean_net_.flatten();
    out.tail(action_dim()) = log_std_;
    return out;
}

void GaussianPolicy::unflatten(const Eigen::VectorXd& params) {
    if (params.size() != n_params()) {
        throw std::invalid_argument("GaussianPolicy::unflatten: wrong parameter count");
    }
    Eigen::VectorXd net_params = params.head(mean_net_.n_params());
    mean_net_.unflatten(net_params);
    log_std_ = params.tail(action_dim())
                   .cwiseMax(cfg_.log_std_min)
                   .cwiseMin(cfg_.log_std_max);
}

void GaussianPolicy::save(std::ostream& out) const {
    out << "curio-policy v2\n";
    out << action_dim() << '\n';
    for (int j = 0; j < action_dim(); ++j) {
        out << fmt_double(log_std_[j]) << (j + 1 < action_dim() ? ' ' : '\n');
    }
    for (int j = 0; j < action_dim(); ++j) {
        out << fmt_double(action_scale_[j]) << (j + 1 < action_dim() ? ' ' : '\n');
    }
    out << obs_scale_.size() << '\n';
    for (Eigen::Index j = 0; j < obs_scale_.size(); ++j) {
        out << fmt_double(obs_scale_[j]) << (j + 1 < obs_scale_.size() ? ' ' : '\n');
    }
    out << fmt_double(cfg_.log_std_min) << ' ' << fmt_double(cfg_.log_std_max) << '\n';
    mean_net_.save(out);
}

GaussianPolicy GaussianPolicy::load(std::istream& in) {
    std::string header;
    std::getline(in, header);
    if (header != "curio-policy v2") {
        throw std::invalid_argument("GaussianPolicy::load: bad header '" + header + "'");
    }
    int action_dim = 0;
    if (!(in >> action_dim) || action_dim < 1) {
        throw std::invalid_argument("GaussianPolicy::load: bad action dimension");
    }
    GaussianPolicy pol;
    pol.log_std_.resize(action_dim);
    pol.action_scale_.resize(action_dim);
    std::string tok;
    for (int j = 0; j < action_dim; ++j) {
        in >> tok;
        pol.log_std_[j] = parse_double(tok);
    }
    for (int j = 0; j < action_dim; ++j) {
        in >> tok;
        pol.action_scale_[j] = parse_double(tok);
    }
    Eigen::Index obs_dim = 0;
    if (!(in >> obs_dim) || obs_dim < 1) {
        throw std::invalid_argument("GaussianPolicy::load: bad observation dimension");
    }
    pol.obs_scale_.resize(obs_dim);
    for (Eigen::Index j = 0; j < obs_dim; ++j) {
        in >> tok;
        pol.obs_scale_[j] = parse_double(tok);
    }
    in >> tok;
    pol.cfg_.log_std_min = parse_double(tok);
    in >> tok;
    pol.cfg_.log_std_max = parse_double(tok);
    pol.mean_net_ = Mlp::load(in);
    if (pol.mean_net_.output_dim() != action_dim) {
        throw std::invalid_argument("GaussianPolicy::load: network output does not match");
    }
    return pol;
}

}  // namespace curio
