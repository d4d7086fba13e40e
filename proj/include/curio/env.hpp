// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace curio {

struct StepResult {
    Eigen::VectorXd observation;
    double extrinsic_reward = 0.0;
    bool terminal = false;   // task-defined end state
    bool truncated = false;  // horizon hit
};

struct EnvSpec {
    std::string id;
    int obs_dim = 0;
    int action_dim = 0;
    int state_dim = 0;
    Eigen::VectorXd action_low;
    Eigen::VectorXd action_high;
    /// Reciprocal nominal observation ranges; obs .* obs_scale is O(1).
    Eigen::VectorXd obs_scale;
    int horizon = 0;
};

/// Stateful single-instance environment. Instances are independent; one
/// instance must be driven from one thread at a time.
///
/// step() clips the incoming action to the action bounds and throws
/// std::logic_error if called after the episode has ended.
class Env {
public:
    virtual ~Env() = default;

    virtual const EnvSpec& spec() const = 0;
    virtual Eigen::VectorXd reset(std::uint64_t seed) = 0;
    virtual StepResult step(const Eigen::VectorXd& action) = 0;

    /// Raw internal state, and a hook to overwrite it (diagnostics and tests).
    virtual Eigen::VectorXd state() const = 0;
    virtual void set_state(const Eigen::VectorXd& s) = 0;
    virtual Eigen::VectorXd observe() const = 0;

    /// Whether this step counts as a task success event (goal event, not
    /// mere survival); used for success flags in learning curves.
    virtual bool success_step(const StepResult& result) const = 0;
};

/// Registry keyed by id: mountaincar, cartpole_swingup, pendulum, acrobot.
std::unique_ptr<Env> make_env(const std::string& id);
std::vector<std::string> env_ids();

}  // namespace curio
