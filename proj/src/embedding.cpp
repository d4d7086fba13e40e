// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "curio/blr.hpp"
#include "curio/common.hpp"

namespace curio {

Normalizer Normalizer::identity(int dim) {
    Normalizer n;
    n.mean = Eigen::VectorXd::Zero(dim);
    n.std = Eigen::VectorXd::Ones(dim);
    return n;
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& x) {
    if (x.rows() < 1) throw std::invalid_argument("Normalizer::fit: empty data");
    Normalizer n;
    n.mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - n.mean.transpose();
    n.std = (centered.array().square().colwise().mean()).sqrt();
    n.std = n.std.cwiseMax(1e-8);  // constant columns stay usable
    return n;
}

Eigen::VectorXd Normalizer::apply(const Eigen::VectorXd& x) const {
    return (x - mean).cwiseQuotient(std);
}

Eigen::MatrixXd Normalizer::apply(const Eigen::MatrixXd& x) const {
    return (x.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
}

FeatureMap::FeatureMap(Normalizer norm, Mlp net) : norm_(std::move(norm)), net_(std::move(net)) {
    if (norm_.mean.size() != net_.input_dim()) {
        throw std::invalid_argument("FeatureMap: normalizer dimension does not match network input");
    }
    if (net_.output_activation() != Activation::Tanh) {
        throw std::invalid_argument("FeatureMap: network must be tanh-activated");
    }
}

FeatureMap FeatureMap::make_random(int input_dim, const std::vector<int>& hidden,
                                   int latent_dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return FeatureMap(Normalizer::identity(input_dim),
                      Mlp::make(input_dim, hidden, latent_dim, Activation::Tanh, rng));
}

Eigen::VectorXd FeatureMap::embed(const Eigen::VectorXd& obs) const {
    if (obs.size() != input_dim()) {
        throw std::invalid_argument("FeatureMap::embed: observation has wrong dimension");
    }
    if (!obs.allFinite()) {
        throw std::invalid_argument("FeatureMap::embed: non-finite observation");
    }
    Eigen::VectorXd out(output_dim());
    out.head(latent_dim()) = net_.forward(norm_.apply(obs));
    out[latent_dim()] = 1.0;
    return out;
}

Eigen::MatrixXd FeatureMap::embed(const Eigen::MatrixXd& obs) const {
    if (obs.cols() != input_dim()) {
        throw std::invalid_argument("FeatureMap::embed: observations have wrong dimension");
    }
    if (!obs.allFinite()) {
        throw std::invalid_argument("FeatureMap::embed: non-finite observation");
    }
    Eigen::MatrixXd out(obs.rows(), output_dim());
    out.leftCols(latent_dim()) = net_.forward(norm_.apply(obs));
    out.col(latent_dim()).setOnes();
    return out;
}

void FeatureMap::save(std::ostream& out) const {
    out << "curio-featuremap v1\n";
    out << input_dim() << ' ' << latent_dim() << '\n';
    for (Eigen::Index i = 0; i < norm_.mean.size(); ++i) {
        out << fmt_double(norm_.mean[i]) << (i + 1 < norm_.mean.size() ? ' ' : '\n');
    }
    for (Eigen::Index i = 0; i < norm_.std.size(); ++i) {
        out << fmt_double(norm_.std[i]) << (i + 1 < norm_.std.size() ? ' ' : '\n');
    }
    net_.save(out);
}

void FeatureMap::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("FeatureMap::save: cannot open " + path);
    save(out);
}

FeatureMap FeatureMap::load(std::istream& in) {
    std::string header;
    std::getline(in, header);
    if (header != "curio-featuremap v1") {
        throw std::invalid_argument("FeatureMap::load: bad header '" + header + "'");
    }
    int input_dim = 0, latent_dim = 0;
    if (!(in >> input_dim >> latent_dim) || input_dim < 1 || latent_dim < 1) {
        throw std::invalid_argument("FeatureMap::load: bad dimensions");
    }
    Normalizer norm;
    norm.mean.resize(input_dim);
    norm.std.resize(input_dim);
    std::string tok;
    for (int i = 0; i < input_dim; ++i) {
        in >> tok;
        norm.mean[i] = parse_double(tok);
    }
    for (int i = 0; i < input_dim; ++i) {
        in >> tok;
        norm.std[i] = parse_double(tok);
    }
    Mlp net = Mlp::load(in);
    if (net.input_dim() != input_dim || net.output_dim() != latent_dim) {
        throw std::invalid_argument("FeatureMap::load: network shape does not match header");
    }
    return FeatureMap(std::move(norm), std::move(net));
}

FeatureMap FeatureMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("FeatureMap::load: cannot open " + path);
    return load(in);
}

void EmbedTrainConfig::validate() const {
    if (!(subset_fraction > 0.0) || subset_fraction > 1.0) {
        throw std::invalid_argument("EmbedTrainConfig: subset_fraction must be in (0, 1]");
    }
    if (minibatch_size < 1) throw std::invalid_argument("EmbedTrainConfig: minibatch_size must be >= 1");
    if (learning_rate < 0.0 || l2_weight < 0.0) {
        throw std::invalid_argument("EmbedTrainConfig: learning_rate and l2_weight must be >= 0");
    }
    if (max_epochs < 0) throw std::invalid_argument("EmbedTrainConfig: max_epochs must be >= 0");
    if (convergence_window < 1) throw std::invalid_argument("EmbedTrainConfig: convergence_window must be >= 1");
    if (convergence_tol < 0.0) throw std::invalid_argument("EmbedTrainConfig: convergence_tol must be >= 0");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("EmbedTrainConfig: alpha, beta must be > 0");
    if (latent_dim < 1) throw std::invalid_argument("EmbedTrainConfig: latent_dim must be >= 1");
    if (!(init_weight_scale > 0.0)) {
        throw std::invalid_argument("EmbedTrainConfig: init_weight_scale must be > 0");
    }
}

namespace {

// Shared forward pass of the conditioned-predictive NLL. Everything the
// backward pass needs is kept.
struct NllForward {
    Eigen::MatrixXd z_cond;    // n x M features of the conditioning set
    Eigen::MatrixXd z_batch;   // b x M features of the batch
    Mlp::Tape tape_cond;
    Mlp::Tape tape_batch;
    Eigen::MatrixXd chol;      // lower Cholesky of A = alpha*I + beta*Zc^T*Zc
    Eigen::MatrixXd heads;     // M x K posterior means (one column per head)
    Eigen::MatrixXd pred;      // b x K predictive means
    Eigen::MatrixXd v;         // M x b, A^-1 * Zb^T
    Eigen::VectorXd s;         // b, predictive variances
    Eigen::MatrixXd resid;     // b x K
    double loss = 0.0;
};

Eigen::MatrixXd chol_solve(const Eigen::MatrixXd& chol, const Eigen::MatrixXd& rhs) {
    Eigen::MatrixXd y = chol.triangularView<Eigen::Lower>().solve(rhs);
    return chol.transpose().triangularView<Eigen::Upper>().solve(y);
}

NllForward nll_forward(const FeatureMap& fm, const DemoSet& conditioning, const DemoSet& batch,
                       double alpha, double beta, bool full_residual) {
    if (conditioning.rows() < 1 || batch.rows() < 1) {
        throw std::invalid_argument("nll: conditioning set and batch must be nonempty");
    }
    if (conditioning.obs_dim() != fm.input_dim() || batch.obs_dim() != fm.input_dim()) {
        throw std::invalid_argument("nll: observation dimension does not match feature map");
    }
    if (conditioning.action_dim() != batch.action_dim()) {
        throw std::invalid_argument("nll: conditioning and batch action dimensions differ");
    }
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("nll: alpha and beta must be > 0");
    }

    const int m = fm.output_dim();
    const Eigen::Index b = batch.rows();
    const Eigen::Index heads = batch.action_dim();
    const double w_resid = full_residual ? 1.0 : 0.5;

    NllForward f;
    // Batched embed with tapes kept for the backward pass.
    f.z_cond.resize(conditioning.rows(), m);
    f.z_cond.leftCols(m - 1) = fm.net().forward(fm.normalizer().apply(conditioning.X), f.tape_cond);
    f.z_cond.col(m - 1).setOnes();
    f.z_batch.resize(b, m);
    f.z_batch.leftCols(m - 1) = fm.net().forward(fm.normalizer().apply(batch.X), f.tape_batch);
    f.z_batch.col(m - 1).setOnes();

    Eigen::MatrixXd a = alpha * Eigen::MatrixXd::Identity(m, m) +
                        beta * (f.z_cond.transpose() * f.z_cond);
    f.chol = spd_cholesky_lower(a);

    f.heads = beta * chol_solve(f.chol, f.z_cond.transpose() * conditioning.T);
    f.pred.noalias() = f.z_batch * f.heads;
    f.v = chol_solve(f.chol, f.z_batch.transpose());
    f.s = (f.z_batch.array() * f.v.transpose().array()).rowwise().sum();
    f.s.array() += 1.0 / beta;
    f.resid = batch.T - f.pred;

    const double kd = static_cast<double>(heads);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < b; ++i) {
        loss += kd * 0.5 * (std::log(2.0 * std::numbers::pi) + std::log(f.s[i]));
        loss += w_resid * f.resid.row(i).squaredNorm() / f.s[i];
    }
    f.loss = loss / static_cast<double>(b);
    return f;
}

}  // namespace

ConditionalMoments conditional_moments(const FeatureMap& fm, const DemoSet& conditioning,
                                       const Eigen::VectorXd& x, double alpha, double beta) {
    if (conditioning.rows() < 1) {
        throw std::invalid_argument("conditional_moments: conditioning set is empty");
    }
    const Eigen::MatrixXd phi = fm.embed(conditioning.X);
    const Eigen::VectorXd phi_x = fm.embed(x);
    const BlrPosterior prior = make_prior(alpha, beta, fm.output_dim());

    ConditionalMoments out;
    out.mean.resize(conditioning.action_dim());
    out.variance = 0.0;
    for (int k = 0; k < conditioning.action_dim(); ++k) {
        const BlrPosterior post = prior.update(phi, conditioning.T.col(k));
        const PredictivePosterior pred = post.predict(phi_x);
        out.mean[k] = pred.mean;
        out.variance = pred.variance;  // identical across heads
    }
    return out;
}

double nll_loss(const FeatureMap& fm, const DemoSet& conditioning, const DemoSet& batch,
                double alpha, double beta, bool full_residual) {
    return nll_forward(fm, conditioning, batch, alpha, beta, full_residual).loss;
}

NllGradient nll_gradient(const FeatureMap& fm, const DemoSet& conditioning,
                         const DemoSet& batch, double alpha, double beta,
                         bool full_residual) {
    NllForward f = nll_forward(fm, conditioning, batch, alpha, beta, full_residual);

    const Eigen::Index b = batch.rows();
    const Eigen::Index heads = batch.action_dim();
    const int m = fm.output_dim();
    const double w_resid = full_residual ? 1.0 : 0.5;
    const double bn = static_cast<double>(b);
    const double kd = static_cast<double>(heads);

    // Cotangents of the predictive means and variances.
    Eigen::MatrixXd pred_bar(b, heads);
    Eigen::VectorXd s_bar(b);
    for (Eigen::Index i = 0; i < b; ++i) {
        const double si = f.s[i];
        pred_bar.row(i) = (-2.0 * w_resid / (bn * si)) * f.resid.row(i);
        s_bar[i] = (kd / (2.0 * si) - w_resid * f.resid.row(i).squaredNorm() / (si * si)) / bn;
    }

    // Through pred = Zb * U and s_i = 1/beta + zb_i^T A^-1 zb_i.
    const Eigen::MatrixXd u_bar = f.z_batch.transpose() * pred_bar;           // M x K
    Eigen::MatrixXd zb_bar = pred_bar * f.heads.transpose();                  // b x M
    zb_bar += 2.0 * (s_bar.asDiagonal() * f.v.transpose());

    // Through U = beta * A^-1 * (Zc^T * Tc) and A = alpha*I + beta*Zc^T*Zc.
    const Eigen::MatrixXd w_bar = beta * chol_solve(f.chol, u_bar);           // M x K
    Eigen::MatrixXd a_bar = -(1.0 / beta) * (w_bar * f.heads.transpose());
    a_bar -= f.v * s_bar.asDiagonal() * f.v.transpose();
    Eigen::MatrixXd zc_bar = conditioning.T * w_bar.transpose();              // n x M
    zc_bar += beta * (f.z_cond * (a_bar + a_bar.transpose()));

    // The appended bias feature is constant: its column carries no gradient.
    Mlp::Grads grads = fm.net().zero_grads();
    fm.net().backward(f.tape_cond, zc_bar.leftCols(m - 1), grads);
    fm.net().backward(f.tape_batch, zb_bar.leftCols(m - 1), grads);

    NllGradient out;
    out.loss = f.loss;
    out.grad = grads.flatten();
    return out;
}

EmbedTrainResult train_embedding(const DemoSet& demos, const EmbedTrainConfig& cfg) {
    demos.validate();
    cfg.validate();

    std::mt19937_64 rng(cfg.seed);
    const Normalizer norm = Normalizer::fit(demos.X);
    Mlp net = Mlp::make(demos.obs_dim(), cfg.hidden, cfg.latent_dim, Activation::Tanh, rng,
                        cfg.init_weight_scale);
    FeatureMap fm(norm, std::move(net));

    const long n = demos.rows();
    const long subset_size =
        std::clamp<long>(std::lround(cfg.subset_fraction * static_cast<double>(n)), 1, n);

    Eigen::VectorXd params = fm.net().flatten();
    Adam opt(static_cast<int>(params.size()), cfg.learning_rate, cfg.l2_weight);

    EmbedTrainResult result;
    std::vector<long> indices(n);
    std::iota(indices.begin(), indices.end(), 0L);

    double best_windowed = std::numeric_limits<double>::infinity();
    int stall = 0;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::shuffle(indices.begin(), indices.end(), rng);
        const DemoSet cond = demos.take({indices.begin(), indices.begin() + subset_size});

        std::shuffle(indices.begin(), indices.end(), rng);
        double epoch_loss = 0.0;
        long n_batches = 0;
        for (long at = 0; at < n; at += cfg.minibatch_size) {
            const long len = std::min<long>(cfg.minibatch_size, n - at);
            const DemoSet mb = demos.take({indices.begin() + at, indices.begin() + at + len});
            NllGradient g = nll_gradient(fm, cond, mb, cfg.alpha, cfg.beta, cfg.full_residual_weight);
            if (!std::isfinite(g.loss)) {
                std::ostringstream msg;
                msg << "train_embedding: non-finite NLL at epoch " << epoch
                    << ", minibatch " << n_batches;
                throw numerical_error(msg.str());
            }
            opt.step(params, g.grad);
            fm.mutable_net().unflatten(params);
            if (!fm.net().finite()) {
                std::ostringstream msg;
                msg << "train_embedding: non-finite parameters at epoch " << epoch
                    << ", minibatch " << n_batches;
                throw numerical_error(msg.str());
            }
            epoch_loss += g.loss;
            ++n_batches;
        }
        result.epoch_nll.push_back(epoch_loss / static_cast<double>(n_batches));
        ++result.epochs_run;

        const int window = cfg.convergence_window;
        if (static_cast<int>(result.epoch_nll.size()) >= window) {
            const double cur = std::accumulate(result.epoch_nll.end() - window,
                                               result.epoch_nll.end(), 0.0) /
                               static_cast<double>(window);
            if (cur < best_windowed - cfg.convergence_tol) {
                best_windowed = cur;
                stall = 0;
            } else if (++stall >= window) {
                break;
            }
        }
    }

    result.feature_map = std::move(fm);
    return result;
}

}  // namespace curio
