// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "curio/common.hpp"

namespace curio {

/// Gaussian prior over linear-regression weights: zero mean, covariance
/// alpha^-1 * I, observation noise precision beta.
struct BlrPrior {
    double alpha;
    double beta;
    int dim;

    BlrPrior(double alpha_, double beta_, int dim_);
};

/// Predictive distribution of the target at one query point.
struct PredictivePosterior {
    double mean;
    double variance;  // >= 1/beta always
};

/// Exact Bayesian linear regression state in a fixed feature space.
///
/// The state is the pair (mean, precision) of the Gaussian posterior over
/// weights; the precision starts at alpha*I and each update adds
/// beta * Phi^T * Phi, so it only ever grows. A Cholesky factor of the
/// precision is kept alongside and refreshed after every update; predictions
/// go through triangular solves, never an explicit inverse.
///
/// Values are immutable: update() and update_variance_only() return a new
/// state and leave the receiver untouched, so states can be shared freely
/// across threads.
class BlrPosterior {
public:
    /// Posterior equal to the prior: precision = alpha*I, mean = 0.
    static BlrPosterior from_prior(const BlrPrior& prior);

    int dim() const { return static_cast<int>(mean_.size()); }
    double beta() const { return beta_; }
    long n_obs() const { return n_obs_; }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& precision() const { return precision_; }
    /// Lower Cholesky factor L with L*L^T = precision.
    const Eigen::MatrixXd& cholesky_factor() const { return chol_; }

    /// Absorb rows (phi, targets): precision += beta*Phi^T*Phi and the mean
    /// is re-solved from the updated precision. N = 0 rows is the identity.
    BlrPosterior update(const Eigen::MatrixXd& phi, const Eigen::VectorXd& targets) const;

    /// Same precision update as update() but the mean is left untouched.
    /// Valid whenever only the predictive variance is consumed downstream.
    BlrPosterior update_variance_only(const Eigen::MatrixXd& phi) const;

    /// Predictive mean and variance at one feature vector.
    /// variance = 1/beta + phi_x^T * precision^-1 * phi_x.
    PredictivePosterior predict(const Eigen::VectorXd& phi_x) const;

    /// Flat text record: dim, beta, n_obs, mean, precision lower triangle.
    void save(std::ostream& out) const;
    static BlrPosterior load(std::istream& in);

private:
    BlrPosterior() = default;

    void refresh_cholesky();
    void check_phi(const Eigen::MatrixXd& phi) const;

    Eigen::VectorXd mean_;
    Eigen::MatrixXd precision_;
    Eigen::MatrixXd chol_;
    double beta_ = 0.0;
    long n_obs_ = 0;
};

inline BlrPosterior make_prior(double alpha, double beta, int dim) {
    return BlrPosterior::from_prior(BlrPrior(alpha, beta, dim));
}

/// Lower Cholesky factor of a symmetric positive definite matrix with the
/// module's retry policy: on failure, add 1e-10 * trace/dim to the diagonal
/// (mutating `m`) and try once more; throw numerical_error after that.
Eigen::MatrixXd spd_cholesky_lower(Eigen::MatrixXd& m);

}  // namespace curio
