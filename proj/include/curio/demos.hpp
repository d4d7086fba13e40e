// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace curio {

/// Demonstration data: rows of observations X paired with action targets T.
struct DemoSet {
    Eigen::MatrixXd X;  // N x D observations
    Eigen::MatrixXd T;  // N x K action targets

    long rows() const { return X.rows(); }
    int obs_dim() const { return static_cast<int>(X.cols()); }
    int action_dim() const { return static_cast<int>(T.cols()); }

    /// Throws unless N >= 2 and X/T row counts agree.
    void validate() const;

    DemoSet take(const std::vector<long>& row_indices) const;
};

/// CSV with header obs_0..obs_{D-1},act_0..act_{K-1}; the interchange format.
void save_demos_csv(const DemoSet& demos, std::ostream& out);
void save_demos_csv(const DemoSet& demos, const std::string& path);
DemoSet load_demos_csv(std::istream& in);
DemoSet load_demos_csv(const std::string& path);

/// Rolls the scripted expert for `env_id` with additive Gaussian action noise
/// until n (observation, pre-noise expert action) rows are collected.
/// Recorded actions are the expert's, clipped to the action bounds; the
/// noisy action is what gets executed.
DemoSet generate_demos(const std::string& env_id, long n, double noise_std, std::uint64_t seed);

}  // namespace curio
