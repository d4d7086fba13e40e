// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/experts.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "curio/envs.hpp"

namespace curio {

namespace {

constexpr double kPi = std::numbers::pi;

double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

Eigen::VectorXd scalar_action(double a) {
    Eigen::VectorXd v(1);
    v[0] = a;
    return v;
}

// Bang-bang energy pumping: push with the velocity.
double mountaincar_expert(const Eigen::VectorXd& s) {
    return s[1] >= 0.0 ? 1.0 : -1.0;
}

// Energy-shaping swing-up with a linear balance controller near upright.
double pendulum_expert(const Eigen::VectorXd& s) {
    const double theta = s[0], theta_dot = s[1];
    const double upright_energy =
        PendulumEnv::kMass * PendulumEnv::kGravity * PendulumEnv::kLength / 2.0;

    if (std::cos(theta) > 0.95 && std::abs(theta_dot) < 2.0) {
        return clip(-12.0 * theta - 2.5 * theta_dot, -PendulumEnv::kMaxTorque,
                    PendulumEnv::kMaxTorque);
    }
    const double energy_gap = upright_energy - PendulumEnv::energy(theta, theta_dot);
    double pump = theta_dot;
    if (std::abs(pump) < 1e-3) pump = 1.0;  // kick out of rest
    return clip(4.0 * energy_gap * (pump > 0.0 ? 1.0 : -1.0), -PendulumEnv::kMaxTorque,
                PendulumEnv::kMaxTorque);
}

// Pole energy shaping through cart acceleration (the pump tapers off as the
// pole energy approaches the upright level), a mild recentering term to stay
// on the rail, and a linear balance controller once the pole is nearly
// upright and slow.
double cartpole_expert(const Eigen::VectorXd& s) {
    const double x = s[0], x_dot = s[1];
    double theta = std::fmod(s[2] + kPi, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    theta -= kPi;  // wrapped to [-pi, pi], 0 = upright
    const double theta_dot = s[3];
    const double cos_t = std::cos(theta);

    if (cos_t > 0.9 && std::abs(theta_dot) < 2.5) {
        return clip(2.0 * theta + 0.4 * theta_dot + 0.05 * x + 0.12 * x_dot, -1.0, 1.0);
    }
    // Pole energy deficit in units of g/leff; zero at the upright-rest level.
    const double leff = CartpoleSwingupEnv::kLength * 4.0 / 3.0;
    const double deficit =
        -(0.5 * theta_dot * theta_dot * leff / CartpoleSwingupEnv::kGravity + (cos_t - 1.0));
    // Accelerating the cart against theta_dot*cos(theta) feeds pole energy.
    const double dir = (theta_dot * cos_t > 0.0) ? 1.0 : -1.0;
    const double pump = -dir * clip(3.0 * deficit, 0.0, 1.0);
    return clip(pump - (0.1 * x + 0.2 * x_dot), -1.0, 1.0);
}

// Torque on the second joint in phase with the swing velocities; coast once
// the tip is near the goal height so the momentum carry finishes the climb.
double acrobot_expert(const Eigen::VectorXd& s) {
    const double height = AcrobotEnv::tip_height(s[0], s[1]);
    if (height >= 1.5) return 0.0;
    return clip(2.0 * s[2] + s[3], -AcrobotEnv::kMaxTorque, AcrobotEnv::kMaxTorque);
}

}  // namespace

bool has_expert(const std::string& env_id) {
    return env_id == "mountaincar" || env_id == "cartpole_swingup" || env_id == "pendulum" ||
           env_id == "acrobot";
}

Eigen::VectorXd expert_action(const std::string& env_id, const Eigen::VectorXd& state) {
    if (env_id == "mountaincar") return scalar_action(mountaincar_expert(state));
    if (env_id == "cartpole_swingup") return scalar_action(cartpole_expert(state));
    if (env_id == "pendulum") return scalar_action(pendulum_expert(state));
    if (env_id == "acrobot") return scalar_action(acrobot_expert(state));
    throw std::invalid_argument("expert_action: no scripted expert for '" + env_id + "'");
}

}  // namespace curio
