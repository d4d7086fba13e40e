// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "curio/env.hpp"

namespace curio {

/// Continuous mountain car. State (x, v), obs = state, action in [-1, 1].
/// Reaching x >= 0.45 pays 100 and ends the episode; every other step pays -1.
class MountainCarEnv final : public Env {
public:
    static constexpr double kMinPos = -1.2;
    static constexpr double kMaxPos = 0.6;
    static constexpr double kMaxSpeed = 0.07;
    static constexpr double kGoalPos = 0.45;
    static constexpr double kPower = 0.0015;
    static constexpr double kGravityScale = 0.0025;  // force term: -0.0025*cos(3x)
    static constexpr double kGoalReward = 100.0;
    static constexpr int kHorizon = 200;

    MountainCarEnv();
    const EnvSpec& spec() const override { return spec_; }
    Eigen::VectorXd reset(std::uint64_t seed) override;
    StepResult step(const Eigen::VectorXd& action) override;
    Eigen::VectorXd state() const override { return state_; }
    void set_state(const Eigen::VectorXd& s) override;
    Eigen::VectorXd observe() const override { return state_; }
    bool success_step(const StepResult& r) const override {
        return r.terminal && r.extrinsic_reward > 0.0;
    }

private:
    EnvSpec spec_;
    Eigen::Vector2d state_;
    std::mt19937_64 rng_;
    int steps_ = 0;
    bool done_ = true;
};

/// Cartpole with the pole starting hanging down. State (x, xdot, theta,
/// thetadot) with theta measured from upright; obs (x, xdot, cos, sin,
/// thetadot). Upright region cos(theta) >= 0.5 pays cos(theta), leaving the
/// rail pays -200 and ends the episode, every other step pays -1.
class CartpoleSwingupEnv final : public Env {
public:
    static constexpr double kGravity = 9.8;
    static constexpr double kMassCart = 1.0;
    static constexpr double kMassPole = 0.1;
    static constexpr double kLength = 0.5;  // half pole length
    static constexpr double kForceMag = 10.0;
    static constexpr double kDt = 0.02;
    static constexpr double kRailLimit = 2.4;
    static constexpr double kFailReward = -200.0;
    static constexpr double kUprightCos = 0.5;
    static constexpr int kHorizon = 500;

    CartpoleSwingupEnv();
    const EnvSpec& spec() const override { return spec_; }
    Eigen::VectorXd reset(std::uint64_t seed) override;
    StepResult step(const Eigen::VectorXd& action) override;
    Eigen::VectorXd state() const override { return state_; }
    void set_state(const Eigen::VectorXd& s) override;
    Eigen::VectorXd observe() const override;
    bool success_step(const StepResult& r) const override {
        return r.extrinsic_reward >= kUprightCos;
    }

private:
    EnvSpec spec_;
    Eigen::Vector4d state_;
    std::mt19937_64 rng_;
    int steps_ = 0;
    bool done_ = true;
};

/// Torque-limited pendulum swing-up with a heavier-than-standard bob.
/// State (theta, thetadot) with theta from upright; obs (cos, sin, thetadot).
/// cos(theta) >= 0.9 pays cos(theta), every other step pays -1. No terminal
/// state; episodes run to the horizon.
class PendulumEnv final : public Env {
public:
    static constexpr double kGravity = 10.0;
    static constexpr double kMass = 1.75;
    static constexpr double kLength = 1.0;
    static constexpr double kDt = 0.05;
    static constexpr double kMaxTorque = 2.0;
    static constexpr double kMaxSpeed = 8.0;
    static constexpr double kUprightCos = 0.9;
    static constexpr int kHorizon = 100;

    PendulumEnv();
    const EnvSpec& spec() const override { return spec_; }
    Eigen::VectorXd reset(std::uint64_t seed) override;
    StepResult step(const Eigen::VectorXd& action) override;
    Eigen::VectorXd state() const override { return state_; }
    void set_state(const Eigen::VectorXd& s) override;
    Eigen::VectorXd observe() const override;
    bool success_step(const StepResult& r) const override {
        return r.extrinsic_reward >= kUprightCos;
    }

    /// Total mechanical energy of the rod (zero at the pivot height).
    static double energy(double theta, double theta_dot);

private:
    EnvSpec spec_;
    Eigen::Vector2d state_;
    std::mt19937_64 rng_;
    int steps_ = 0;
    bool done_ = true;
};

/// Two-link underactuated acrobot, torque on the second joint. State
/// (theta1, theta2, dtheta1, dtheta2) with theta1 from hanging down; obs is
/// the trig encoding. Episode ends when the tip height -cos(theta1) -
/// cos(theta1+theta2) reaches 1.9; every step pays -1.
class AcrobotEnv final : public Env {
public:
    static constexpr double kGravity = 9.8;
    static constexpr double kLink1Length = 1.0;
    static constexpr double kLink2Length = 1.0;
    static constexpr double kLink1Mass = 1.0;
    static constexpr double kLink2Mass = 1.0;
    static constexpr double kLink1Com = 0.5;
    static constexpr double kLink2Com = 0.5;
    static constexpr double kLink1Inertia = 1.0;
    static constexpr double kLink2Inertia = 1.0;
    static constexpr double kDt = 0.2;
    static constexpr double kMaxTorque = 1.0;
    static constexpr double kMaxVel1 = 4.0 * 3.14159265358979323846;
    static constexpr double kMaxVel2 = 9.0 * 3.14159265358979323846;
    static constexpr double kGoalHeight = 1.9;
    static constexpr int kHorizon = 500;

    AcrobotEnv();
    const EnvSpec& spec() const override { return spec_; }
    Eigen::VectorXd reset(std::uint64_t seed) override;
    StepResult step(const Eigen::VectorXd& action) override;
    Eigen::VectorXd state() const override { return state_; }
    void set_state(const Eigen::VectorXd& s) override;
    Eigen::VectorXd observe() const override;
    bool success_step(const StepResult& r) const override { return r.terminal; }

    static double tip_height(double theta1, double theta2);

private:
    EnvSpec spec_;
    Eigen::Vector4d state_;
    std::mt19937_64 rng_;
    int steps_ = 0;
    bool done_ = true;
};

}  // namespace curio
