// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "curio/curiosity.hpp"
#include "curio/embedding.hpp"
#include "curio/reinforce.hpp"

namespace curio {

/// Full declarative description of one experiment arm.
struct ExperimentConfig {
    std::string env_id = "mountaincar";
    std::string algorithm = "reinforce";
    bool curiosity = false;
    double eta = 1.0;
    double alpha = 1e-4;
    double beta = 1e2;

    // Embedding source when curiosity is on: an existing feature-map file, an
    // existing demo CSV, or (neither) demos generated from the scripted expert.
    std::string feature_map_path;
    std::string demos_path;
    long demo_count = 2000;
    double demo_noise_std = 0.1;
    EmbedTrainConfig embed;

    bool pretrain_policy = false;  // behavior-clone the mean net on the demos first
    BcConfig bc;

    ReinforceConfig rl;
    PolicyConfig policy;
    bool save_policies = true;  // write policy_seed_<seed>.txt checkpoints

    int n_seeds = 1;
    std::uint64_t seed_base = 0;
    int episodes = 300;
    int smooth_window = 10;
    bool dump_trajectories = false;
    int threads = 0;  // 0 = hardware concurrency

    std::string out_dir;

    void validate() const;
    /// Everything except out_dir (outputs must not depend on where they live).
    std::string to_json_string() const;
};

struct CurveRow {
    int episode = 0;
    long timesteps = 0;          // cumulative env steps at episode end
    double mean_extrinsic = 0.0; // per-step mean extrinsic reward
    double mean_curiosity = 0.0; // per-step mean intrinsic reward as applied (eta * c)
    int success = 0;
};

struct LearningCurve {
    std::vector<CurveRow> rows;
};

void save_curve_csv(const LearningCurve& curve, std::ostream& out);
void save_curve_csv(const LearningCurve& curve, const std::string& path);
LearningCurve load_curve_csv(std::istream& in);
LearningCurve load_curve_csv(const std::string& path);

void save_trajectory_csv(const Trajectory& traj, std::ostream& out);

struct SeedResult {
    std::uint64_t seed = 0;
    LearningCurve curve;
    GaussianPolicy final_policy;
    double min_curiosity = 0.0;     // smallest raw c_t seen (0 when curiosity is off)
    long curiosity_samples = 0;
    std::optional<long> timesteps_to_first_success;
    bool failed = false;
    std::string error;
};

/// Run one seed of the configured experiment (the per-episode loop:
/// act, observe, score curiosity against the pre-episode posterior, absorb
/// the episode, hand the trajectory to the learner).
SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed);

struct RunSummary {
    std::vector<std::uint64_t> seeds;
    std::vector<double> final_rewards;      // smoothed final metric per seed
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::vector<long> timesteps_to_peak;    // per seed, on the smoothed curve
    int successes = 0;                      // seeds with at least one success
    int failed_seeds = 0;
    bool partial = false;                   // some seeds failed
    double min_curiosity = 0.0;
    long curiosity_samples = 0;
    std::optional<double> speedup;          // filled by compare runs
    std::optional<bool> speedup_inverted;
};

/// Runs every seed (in parallel workers), writes per-seed learning-curve
/// CSVs plus config/summary/manifest files under cfg.out_dir, and aggregates.
/// Per-seed failures are recorded and the experiment continues.
RunSummary run_experiment(const ExperimentConfig& cfg,
                          std::vector<SeedResult>* seed_results = nullptr);

/// Linear-interpolation quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Trailing moving average with the given window.
std::vector<double> smooth(const std::vector<double>& values, int window);

struct CurvePoint {
    long timesteps = 0;
    double value = 0.0;
};

struct MetricCurve {
    std::string metric;
    std::vector<CurvePoint> points;
};

MetricCurve metric_curve(const LearningCurve& curve, const std::string& metric = "mean_extrinsic");

struct SpeedupResult {
    double ratio = 1.0;
    bool inverted = false;  // curiosity never matched the baseline's best
};

/// Timestep ratio for the curiosity curve to match the baseline's best
/// smoothed value. If it never does, the inverted ratio (baseline matching
/// the curiosity curve's best) is returned and flagged.
SpeedupResult compute_speedup(const MetricCurve& curiosity_curve,
                              const MetricCurve& baseline_curve, int smooth_window = 10);

/// Vanilla and curiosity arms under one roof, plus the speedup between the
/// pointwise-median curves.
struct CompareSummary {
    RunSummary vanilla;
    RunSummary curiosity;
    SpeedupResult speedup;
    std::optional<long> vanilla_median_tts;    // median timesteps to first success
    std::optional<long> curiosity_median_tts;
};

CompareSummary compare_experiment(const ExperimentConfig& base_cfg);

/// Curiosity reward on a uniform grid over the mountaincar state box
/// [-1.2, 0.6] x [-0.07, 0.07]. Writes `resolution`^2 CSV rows; optionally a
/// visited-state list for overlay. Only 2-D state spaces are supported.
void export_curiosity_surface(const CuriosityState& cs, const std::string& env_id,
                              int resolution, const std::string& grid_csv_path,
                              const std::vector<Eigen::VectorXd>* visited = nullptr,
                              const std::string& visited_csv_path = "");

/// Mean grid value over an x-band of an exported surface; the Fig.-style
/// band-drop checks build on this.
double surface_band_mean(const std::string& grid_csv_path, double x_lo, double x_hi);

}  // namespace curio
