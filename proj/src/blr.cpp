// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/blr.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace curio {

BlrPrior::BlrPrior(double alpha_, double beta_, int dim_)
    : alpha(alpha_), beta(beta_), dim(dim_) {
    if (!(alpha > 0.0)) throw std::invalid_argument("BlrPrior: alpha must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("BlrPrior: beta must be > 0");
    if (dim < 1) throw std::invalid_argument("BlrPrior: dim must be >= 1");
}

BlrPosterior BlrPosterior::from_prior(const BlrPrior& prior) {
    BlrPosterior post;
    post.mean_ = Eigen::VectorXd::Zero(prior.dim);
    post.precision_ = prior.alpha * Eigen::MatrixXd::Identity(prior.dim, prior.dim);
    post.beta_ = prior.beta;
    post.n_obs_ = 0;
    post.refresh_cholesky();
    return post;
}

Eigen::MatrixXd spd_cholesky_lower(Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    // One symmetric jitter retry, then fail loudly.
    const double jitter = 1e-10 * m.trace() / static_cast<double>(m.rows());
    Eigen::MatrixXd bumped = m;
    bumped.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> retry(bumped);
    if (retry.info() != Eigen::Success) {
        throw numerical_error("precision matrix not positive definite after jitter retry");
    }
    m = bumped;
    return retry.matrixL();
}

void BlrPosterior::refresh_cholesky() {
    chol_ = spd_cholesky_lower(precision_);
}

void BlrPosterior::check_phi(const Eigen::MatrixXd& phi) const {
    if (phi.cols() != dim()) {
        throw std::invalid_argument("BlrPosterior: feature matrix has " +
                                    std::to_string(phi.cols()) + " columns, expected " +
                                    std::to_string(dim()));
    }
}

BlrPosterior BlrPosterior::update(const Eigen::MatrixXd& phi,
                                  const Eigen::VectorXd& targets) const {
    check_phi(phi);
    if (targets.size() != phi.rows()) {
        throw std::invalid_argument("BlrPosterior: targets length does not match row count");
    }
    if (phi.rows() == 0) return *this;

    BlrPosterior next = *this;
    next.precision_ = precision_ + beta_ * (phi.transpose() * phi);
    next.refresh_cholesky();
    // m' solves  precision' * m' = precision * m + beta * Phi^T * t.
    const Eigen::VectorXd rhs = precision_ * mean_ + beta_ * (phi.transpose() * targets);
    Eigen::VectorXd y = next.chol_.triangularView<Eigen::Lower>().solve(rhs);
    next.mean_ = next.chol_.transpose().triangularView<Eigen::Upper>().solve(y);
    next.n_obs_ = n_obs_ + phi.rows();
    return next;
}

BlrPosterior BlrPosterior::update_variance_only(const Eigen::MatrixXd& phi) const {
    check_phi(phi);
    if (phi.rows() == 0) return *this;

    BlrPosterior next = *this;
    next.precision_ = precision_ + beta_ * (phi.transpose() * phi);
    next.refresh_cholesky();
    next.n_obs_ = n_obs_ + phi.rows();
    return next;
}

PredictivePosterior BlrPosterior::predict(const Eigen::VectorXd& phi_x) const {
    if (phi_x.size() != dim()) {
        throw std::invalid_argument("BlrPosterior: query feature vector has wrong length");
    }
    const Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>().solve(phi_x);
    PredictivePosterior pred;
    pred.mean = mean_.dot(phi_x);
    pred.variance = 1.0 / beta_ + y.squaredNorm();
    return pred;
}

void BlrPosterior::save(std::ostream& out) const {
    out << "curio-blr v1\n";
    out << dim() << ' ' << fmt_double(beta_) << ' ' << n_obs_ << '\n';
    for (int i = 0; i < dim(); ++i) {
        out << fmt_double(mean_[i]) << (i + 1 < dim() ? ' ' : '\n');
    }
    for (int i = 0; i < dim(); ++i) {
        for (int j = 0; j <= i; ++j) {
            out << fmt_double(precision_(i, j)) << (j < i ? ' ' : '\n');
        }
    }
}

BlrPosterior BlrPosterior::load(std::istream& in) {
    std::string header;
    std::getline(in, header);
    if (header != "curio-blr v1") {
        throw std::invalid_argument("BlrPosterior::load: bad header '" + header + "'");
    }
    int dim = 0;
    std::string beta_s;
    long n_obs = 0;
    if (!(in >> dim >> beta_s >> n_obs) || dim < 1) {
        throw std::invalid_argument("BlrPosterior::load: bad dimensions line");
    }
    BlrPosterior post;
    post.beta_ = parse_double(beta_s);
    post.n_obs_ = n_obs;
    post.mean_.resize(dim);
    std::string tok;
    for (int i = 0; i < dim; ++i) {
        in >> tok;
        post.mean_[i] = parse_double(tok);
    }
    post.precision_.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            if (!(in >> tok)) throw std::invalid_argument("BlrPosterior::load: truncated record");
            post.precision_(i, j) = parse_double(tok);
            post.precision_(j, i) = post.precision_(i, j);
        }
    }
    post.refresh_cholesky();
    return post;
}

}  // namespace curio
