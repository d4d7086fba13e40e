// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/envs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curio {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double theta) {
    theta = std::fmod(theta + kPi, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    return theta - kPi;
}

double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double clip_action_1d(const Eigen::VectorXd& action, const EnvSpec& spec) {
    if (action.size() != spec.action_dim) {
        throw std::invalid_argument(spec.id + ": action has wrong dimension");
    }
    return clip(action[0], spec.action_low[0], spec.action_high[0]);
}

void require_live(bool done, const std::string& id) {
    if (done) throw std::logic_error(id + ": step() after the episode has ended");
}

EnvSpec make_spec(std::string id, int obs_dim, int state_dim, double act_bound, int horizon,
                  std::initializer_list<double> obs_range) {
    EnvSpec spec;
    spec.id = std::move(id);
    spec.obs_dim = obs_dim;
    spec.action_dim = 1;
    spec.state_dim = state_dim;
    spec.action_low = Eigen::VectorXd::Constant(1, -act_bound);
    spec.action_high = Eigen::VectorXd::Constant(1, act_bound);
    spec.obs_scale.resize(obs_dim);
    int i = 0;
    for (double range : obs_range) spec.obs_scale[i++] = 1.0 / range;
    spec.horizon = horizon;
    return spec;
}

// Classic RK4 step for a fixed-size first-order system.
template <typename Deriv, int N>
Eigen::Matrix<double, N, 1> rk4(const Eigen::Matrix<double, N, 1>& y, double dt, Deriv f) {
    const auto k1 = f(y);
    const auto k2 = f((y + 0.5 * dt * k1).eval());
    const auto k3 = f((y + 0.5 * dt * k2).eval());
    const auto k4 = f((y + dt * k3).eval());
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

// ---------------------------------------------------------------------------
// MountainCar

MountainCarEnv::MountainCarEnv()
    : spec_(make_spec("mountaincar", 2, 2, 1.0, kHorizon, {1.2, 0.07})), state_(Eigen::Vector2d::Zero()) {}

Eigen::VectorXd MountainCarEnv::reset(std::uint64_t seed) {
    rng_.seed(seed);
    std::uniform_real_distribution<double> pos(-0.6, -0.4);
    state_ << pos(rng_), 0.0;
    steps_ = 0;
    done_ = false;
    return observe();
}

void MountainCarEnv::set_state(const Eigen::VectorXd& s) {
    if (s.size() != 2) throw std::invalid_argument("mountaincar: state must have 2 entries");
    state_ = s;
}

StepResult MountainCarEnv::step(const Eigen::VectorXd& action) {
    require_live(done_, spec_.id);
    const double a = clip_action_1d(action, spec_);

    double x = state_[0], v = state_[1];
    v += a * kPower - kGravityScale * std::cos(3.0 * x);
    v = clip(v, -kMaxSpeed, kMaxSpeed);
    x += v;
    x = clip(x, kMinPos, kMaxPos);
    if (x <= kMinPos && v < 0.0) v = 0.0;  // inelastic left wall
    state_ << x, v;

    ++steps_;
    StepResult r;
    r.terminal = (x >= kGoalPos);
    r.extrinsic_reward = r.terminal ? kGoalReward : -1.0;
    r.truncated = !r.terminal && steps_ >= kHorizon;
    r.observation = observe();
    done_ = r.terminal || r.truncated;
    return r;
}

// ---------------------------------------------------------------------------
// CartpoleSwingup

CartpoleSwingupEnv::CartpoleSwingupEnv()
    : spec_(make_spec("cartpole_swingup", 5, 4, 1.0, kHorizon, {2.4, 3.0, 1.0, 1.0, 8.0})),
      state_(Eigen::Vector4d::Zero()) {}

Eigen::VectorXd CartpoleSwingupEnv::reset(std::uint64_t seed) {
    rng_.seed(seed);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    state_ << noise(rng_), noise(rng_), kPi + noise(rng_), noise(rng_);  // pole down
    steps_ = 0;
    done_ = false;
    return observe();
}

void CartpoleSwingupEnv::set_state(const Eigen::VectorXd& s) {
    if (s.size() != 4) throw std::invalid_argument("cartpole_swingup: state must have 4 entries");
    state_ = s;
}

Eigen::VectorXd CartpoleSwingupEnv::observe() const {
    Eigen::VectorXd obs(5);
    obs << state_[0], state_[1], std::cos(state_[2]), std::sin(state_[2]), state_[3];
    return obs;
}

StepResult CartpoleSwingupEnv::step(const Eigen::VectorXd& action) {
    require_live(done_, spec_.id);
    const double force = kForceMag * clip_action_1d(action, spec_);

    double x = state_[0], x_dot = state_[1], theta = state_[2], theta_dot = state_[3];
    const double total_mass = kMassCart + kMassPole;
    const double pml = kMassPole * kLength;
    const double cos_t = std::cos(theta), sin_t = std::sin(theta);
    const double temp = (force + pml * theta_dot * theta_dot * sin_t) / total_mass;
    const double theta_acc = (kGravity * sin_t - cos_t * temp) /
                             (kLength * (4.0 / 3.0 - kMassPole * cos_t * cos_t / total_mass));
    const double x_acc = temp - pml * theta_acc * cos_t / total_mass;

    // Semi-implicit Euler: velocities first, then positions with new velocities.
    x_dot += kDt * x_acc;
    x += kDt * x_dot;
    theta_dot += kDt * theta_acc;
    theta += kDt * theta_dot;
    state_ << x, x_dot, theta, theta_dot;

    ++steps_;
    StepResult r;
    const bool off_rail = (x < -kRailLimit) || (x > kRailLimit);
    r.terminal = off_rail;
    if (off_rail) {
        r.extrinsic_reward = kFailReward;
    } else {
        const double c = std::cos(theta);
        r.extrinsic_reward = (c >= kUprightCos) ? c : -1.0;
    }
    r.truncated = !r.terminal && steps_ >= kHorizon;
    r.observation = observe();
    done_ = r.terminal || r.truncated;
    return r;
}

// ---------------------------------------------------------------------------
// Pendulum

PendulumEnv::PendulumEnv()
    : spec_(make_spec("pendulum", 3, 2, kMaxTorque, kHorizon, {1.0, 1.0, 8.0})), state_(Eigen::Vector2d::Zero()) {}

Eigen::VectorXd PendulumEnv::reset(std::uint64_t seed) {
    rng_.seed(seed);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> vel(-1.0, 1.0);
    state_ << ang(rng_), vel(rng_);
    steps_ = 0;
    done_ = false;
    return observe();
}

void PendulumEnv::set_state(const Eigen::VectorXd& s) {
    if (s.size() != 2) throw std::invalid_argument("pendulum: state must have 2 entries");
    state_ = s;
}

Eigen::VectorXd PendulumEnv::observe() const {
    Eigen::VectorXd obs(3);
    obs << std::cos(state_[0]), std::sin(state_[0]), state_[1];
    return obs;
}

double PendulumEnv::energy(double theta, double theta_dot) {
    // Uniform rod pivoted at one end: I = m l^2 / 3, center of mass at l/2.
    const double kinetic = 0.5 * (kMass * kLength * kLength / 3.0) * theta_dot * theta_dot;
    const double potential = kMass * kGravity * (kLength / 2.0) * std::cos(theta);
    return kinetic + potential;
}

StepResult PendulumEnv::step(const Eigen::VectorXd& action) {
    require_live(done_, spec_.id);
    const double torque = clip_action_1d(action, spec_);

    const auto deriv = [torque](const Eigen::Vector2d& s) -> Eigen::Vector2d {
        const double theta = s[0], theta_dot = s[1];
        const double theta_acc = 1.5 * kGravity / kLength * std::sin(theta) +
                                 3.0 / (kMass * kLength * kLength) * torque;
        return {theta_dot, theta_acc};
    };
    Eigen::Vector2d next = rk4<decltype(deriv), 2>(state_, kDt, deriv);
    next[0] = wrap_angle(next[0]);
    next[1] = clip(next[1], -kMaxSpeed, kMaxSpeed);
    state_ = next;

    ++steps_;
    StepResult r;
    const double c = std::cos(state_[0]);
    r.extrinsic_reward = (c >= kUprightCos) ? c : -1.0;
    r.terminal = false;
    r.truncated = steps_ >= kHorizon;
    r.observation = observe();
    done_ = r.truncated;
    return r;
}

// ---------------------------------------------------------------------------
// Acrobot

AcrobotEnv::AcrobotEnv()
    : spec_(make_spec("acrobot", 6, 4, kMaxTorque, kHorizon,
                 {1.0, 1.0, 1.0, 1.0, 4.0 * kPi, 9.0 * kPi})), state_(Eigen::Vector4d::Zero()) {}

Eigen::VectorXd AcrobotEnv::reset(std::uint64_t seed) {
    rng_.seed(seed);
    std::uniform_real_distribution<double> noise(-0.1, 0.1);
    state_ << noise(rng_), noise(rng_), noise(rng_), noise(rng_);
    steps_ = 0;
    done_ = false;
    return observe();
}

void AcrobotEnv::set_state(const Eigen::VectorXd& s) {
    if (s.size() != 4) throw std::invalid_argument("acrobot: state must have 4 entries");
    state_ = s;
}

Eigen::VectorXd AcrobotEnv::observe() const {
    Eigen::VectorXd obs(6);
    obs << std::cos(state_[0]), std::sin(state_[0]), std::cos(state_[1]), std::sin(state_[1]),
        state_[2], state_[3];
    return obs;
}

double AcrobotEnv::tip_height(double theta1, double theta2) {
    return -std::cos(theta1) - std::cos(theta1 + theta2);
}

StepResult AcrobotEnv::step(const Eigen::VectorXd& action) {
    require_live(done_, spec_.id);
    const double torque = clip_action_1d(action, spec_);

    const auto deriv = [torque](const Eigen::Vector4d& s) -> Eigen::Vector4d {
        const double t1 = s[0], t2 = s[1], dt1 = s[2], dt2 = s[3];
        const double m1 = kLink1Mass, m2 = kLink2Mass;
        const double l1 = kLink1Length;
        const double lc1 = kLink1Com, lc2 = kLink2Com;
        const double i1 = kLink1Inertia, i2 = kLink2Inertia;
        const double g = kGravity;

        const double d1 =
            m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * std::cos(t2)) + i1 + i2;
        const double d2 = m2 * (lc2 * lc2 + l1 * lc2 * std::cos(t2)) + i2;
        const double phi2 = m2 * lc2 * g * std::cos(t1 + t2 - kPi / 2.0);
        const double phi1 = -m2 * l1 * lc2 * dt2 * dt2 * std::sin(t2) -
                            2.0 * m2 * l1 * lc2 * dt2 * dt1 * std::sin(t2) +
                            (m1 * lc1 + m2 * l1) * g * std::cos(t1 - kPi / 2.0) + phi2;
        const double ddt2 =
            (torque + d2 / d1 * phi1 - m2 * l1 * lc2 * dt1 * dt1 * std::sin(t2) - phi2) /
            (m2 * lc2 * lc2 + i2 - d2 * d2 / d1);
        const double ddt1 = -(d2 * ddt2 + phi1) / d1;
        return {dt1, dt2, ddt1, ddt2};
    };
    Eigen::Vector4d next = rk4<decltype(deriv), 4>(state_, kDt, deriv);
    next[0] = wrap_angle(next[0]);
    next[1] = wrap_angle(next[1]);
    next[2] = clip(next[2], -kMaxVel1, kMaxVel1);
    next[3] = clip(next[3], -kMaxVel2, kMaxVel2);
    state_ = next;

    ++steps_;
    StepResult r;
    r.terminal = tip_height(state_[0], state_[1]) >= kGoalHeight;
    r.extrinsic_reward = -1.0;
    r.truncated = !r.terminal && steps_ >= kHorizon;
    r.observation = observe();
    done_ = r.terminal || r.truncated;
    return r;
}

// ---------------------------------------------------------------------------
// Registry

std::unique_ptr<Env> make_env(const std::string& id) {
    if (id == "mountaincar") return std::make_unique<MountainCarEnv>();
    if (id == "cartpole_swingup") return std::make_unique<CartpoleSwingupEnv>();
    if (id == "pendulum") return std::make_unique<PendulumEnv>();
    if (id == "acrobot") return std::make_unique<AcrobotEnv>();
    throw std::invalid_argument("make_env: unknown environment id '" + id + "'");
}

std::vector<std::string> env_ids() {
    return {"mountaincar", "cartpole_swingup", "pendulum", "acrobot"};
}

}  // namespace curio
