// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>

namespace curio {

/// Scripted demonstration controllers, one per environment, operating on the
/// raw internal state. Actions come back already inside the action bounds.
/// Throws std::invalid_argument for an unknown environment id.
Eigen::VectorXd expert_action(const std::string& env_id, const Eigen::VectorXd& state);

bool has_expert(const std::string& env_id);

}  // namespace curio
