// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "curio/harness.hpp"

using namespace curio;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

// Small, fast curiosity settings for plumbing tests.
ExperimentConfig tiny_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.env_id = "mountaincar";
    cfg.episodes = 5;
    cfg.n_seeds = 1;
    cfg.seed_base = 7;
    cfg.demo_count = 60;
    cfg.embed.max_epochs = 2;
    cfg.embed.latent_dim = 4;
    cfg.embed.hidden = {8};
    cfg.embed.minibatch_size = 32;
    cfg.out_dir = out_dir;
    cfg.threads = 1;
    return cfg;
}

MetricCurve curve_of(std::vector<std::pair<long, double>> pts) {
    MetricCurve c;
    c.metric = "mean_extrinsic";
    for (auto [t, v] : pts) c.points.push_back({t, v});
    return c;
}

}  // namespace

TEST_CASE("linear-interpolation quantiles match the worked example") {
    std::vector<double> values;
    for (int i = 10; i >= 1; --i) values.push_back(static_cast<double>(i));
    CHECK(quantile(values, 0.5) == doctest::Approx(5.5).epsilon(1e-15));
    CHECK(quantile(values, 0.25) == doctest::Approx(3.25).epsilon(1e-15));
    CHECK(quantile(values, 0.75) == doctest::Approx(7.75).epsilon(1e-15));
    CHECK(quantile({4.0}, 0.5) == 4.0);
    CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(quantile({1.0}, 1.5), std::invalid_argument);
}

TEST_CASE("trailing smoothing window") {
    const std::vector<double> v{1.0, 3.0, 5.0, 7.0};
    const auto s = smooth(v, 2);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 2.0);
    CHECK(s[2] == 4.0);
    CHECK(s[3] == 6.0);
    const auto s1 = smooth(v, 1);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(s1[i] == v[i]);
}

TEST_CASE("speedup: curiosity matching the baseline best early gives the direct ratio") {
    const MetricCurve baseline = curve_of({{500, 0.5}, {1000, 1.0}});
    const MetricCurve curiosity = curve_of({{500, 1.0}, {1000, 1.0}});
    const auto s = compute_speedup(curiosity, baseline, 1);
    CHECK(s.ratio == doctest::Approx(2.0));
    CHECK(!s.inverted);
}

TEST_CASE("speedup of identical curves is one") {
    const MetricCurve c = curve_of({{100, 0.2}, {200, 0.6}, {300, 0.9}});
    const auto s = compute_speedup(c, c, 1);
    CHECK(s.ratio == doctest::Approx(1.0));
    CHECK(!s.inverted);
}

TEST_CASE("speedup falls back to the inverted definition when curiosity never matches") {
    // Baseline peaks at 3.0; curiosity tops out at 2.0 (first at t=200).
    // Baseline already reaches 2.0 at t=100, so the inverted ratio is 2.
    const MetricCurve baseline = curve_of({{100, 2.5}, {200, 3.0}});
    const MetricCurve curiosity = curve_of({{100, 1.0}, {200, 2.0}, {300, 2.0}});
    const auto s = compute_speedup(curiosity, baseline, 1);
    CHECK(s.inverted);
    CHECK(s.ratio == doctest::Approx(2.0));
}

TEST_CASE("speedup validates metric names and non-empty curves") {
    MetricCurve a = curve_of({{100, 1.0}});
    MetricCurve b = curve_of({{100, 1.0}});
    b.metric = "mean_curiosity";
    CHECK_THROWS_AS(compute_speedup(a, b, 1), std::invalid_argument);
    MetricCurve empty;
    empty.metric = "mean_extrinsic";
    CHECK_THROWS_AS(compute_speedup(a, empty, 1), std::invalid_argument);
}

TEST_CASE("learning-curve CSV round-trips") {
    LearningCurve curve;
    curve.rows.push_back({0, 200, -1.0, 0.25, 0});
    curve.rows.push_back({1, 350, -0.5, 0.125, 1});
    std::stringstream buf;
    save_curve_csv(curve, buf);
    const LearningCurve loaded = load_curve_csv(buf);
    REQUIRE(loaded.rows.size() == 2);
    CHECK(loaded.rows[1].timesteps == 350);
    CHECK(loaded.rows[1].mean_extrinsic == -0.5);
    CHECK(loaded.rows[1].success == 1);
}

TEST_CASE("a one-seed one-episode run writes exactly the documented artifacts") {
    const fs::path dir = fresh_dir("curio_test_run1");
    ExperimentConfig cfg = tiny_config(dir.string());
    cfg.episodes = 1;

    const RunSummary summary = run_experiment(cfg);
    CHECK(summary.failed_seeds == 0);
    CHECK(!summary.partial);
    CHECK(fs::exists(dir / "config.json"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "seed_7.csv"));

    const LearningCurve curve = load_curve_csv((dir / "seed_7.csv").string());
    REQUIRE(curve.rows.size() == 1);
    CHECK(curve.rows[0].episode == 0);
    CHECK(curve.rows[0].timesteps >= 1);
    fs::remove_all(dir);
}

TEST_CASE("curiosity off and eta = 0 produce byte-identical learning curves") {
    const fs::path dir_off = fresh_dir("curio_test_off");
    const fs::path dir_eta0 = fresh_dir("curio_test_eta0");

    ExperimentConfig off = tiny_config(dir_off.string());
    off.curiosity = false;
    off.eta = 0.7;  // ignored when curiosity is off
    run_experiment(off);

    ExperimentConfig eta0 = tiny_config(dir_eta0.string());
    eta0.curiosity = true;
    eta0.eta = 0.0;
    run_experiment(eta0);

    CHECK(slurp(dir_off / "seed_7.csv") == slurp(dir_eta0 / "seed_7.csv"));
    fs::remove_all(dir_off);
    fs::remove_all(dir_eta0);
}

TEST_CASE("summary statistics are recomputable from the per-seed CSVs") {
    const fs::path dir = fresh_dir("curio_test_agg");
    ExperimentConfig cfg = tiny_config(dir.string());
    cfg.curiosity = false;
    cfg.n_seeds = 4;
    cfg.episodes = 12;
    cfg.threads = 2;

    const RunSummary summary = run_experiment(cfg);
    REQUIRE(summary.final_rewards.size() == 4);

    // Independent recomputation straight from the CSVs.
    std::vector<double> finals;
    for (std::uint64_t seed = 7; seed < 11; ++seed) {
        const LearningCurve curve =
            load_curve_csv((dir / ("seed_" + std::to_string(seed) + ".csv")).string());
        std::vector<double> metric;
        for (const auto& r : curve.rows) metric.push_back(r.mean_extrinsic);
        finals.push_back(smooth(metric, cfg.smooth_window).back());
    }
    for (std::size_t i = 0; i < finals.size(); ++i) CHECK(finals[i] == summary.final_rewards[i]);
    CHECK(summary.median == quantile(finals, 0.5));
    CHECK(summary.q25 == quantile(finals, 0.25));
    CHECK(summary.q75 == quantile(finals, 0.75));
    fs::remove_all(dir);
}

TEST_CASE("identical configs in different directories give byte-identical outputs") {
    const fs::path dir_a = fresh_dir("curio_test_det_a");
    const fs::path dir_b = fresh_dir("curio_test_det_b");

    ExperimentConfig cfg = tiny_config(dir_a.string());
    cfg.curiosity = true;
    cfg.n_seeds = 2;
    cfg.threads = 2;  // worker scheduling must not affect results
    run_experiment(cfg);

    cfg.out_dir = dir_b.string();
    cfg.threads = 1;
    run_experiment(cfg);

    for (const char* name : {"seed_7.csv", "seed_8.csv", "policy_seed_7.txt", "policy_seed_8.txt",
                             "summary.json", "config.json"}) {
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("per-seed failures are recorded and the run continues") {
    const fs::path dir = fresh_dir("curio_test_fail");
    ExperimentConfig cfg = tiny_config(dir.string());
    cfg.curiosity = true;
    cfg.n_seeds = 2;
    // A feature map whose input dimension cannot match any env observation.
    const fs::path bad_fm = dir / "bad_fm.txt";
    fs::create_directories(dir);
    FeatureMap::make_random(7, {4}, 3, 0).save(bad_fm.string());
    cfg.feature_map_path = bad_fm.string();

    std::vector<SeedResult> seeds;
    const RunSummary summary = run_experiment(cfg, &seeds);
    CHECK(summary.partial);
    CHECK(summary.failed_seeds == 2);
    REQUIRE(seeds.size() == 2);
    CHECK(seeds[0].failed);
    CHECK(!seeds[0].error.empty());
    fs::remove_all(dir);
}

TEST_CASE("curiosity surface export: fresh prior grid is finite with res^2 rows") {
    const fs::path dir = fresh_dir("curio_test_surface");
    fs::create_directories(dir);
    auto fm = std::make_shared<const FeatureMap>(FeatureMap::make_random(2, {8}, 4, 3));
    const auto cs = CuriosityState::fresh(fm, 1e-4, 1e2, 1.0);

    const std::string grid = (dir / "grid.csv").string();
    export_curiosity_surface(cs, "mountaincar", 16, grid);

    std::ifstream in(grid);
    std::string line;
    std::getline(in, line);
    CHECK(line == "position,velocity,curiosity");
    long rows = 0;
    double lo = 1e300, hi = -1e300;
    while (std::getline(in, line)) {
        const auto pos = line.find_last_of(',');
        const double c = std::stod(line.substr(pos + 1));
        CHECK(std::isfinite(c));
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        ++rows;
    }
    CHECK(rows == 16 * 16);
    CHECK(hi - lo < 1e6);  // finite spread on the prior-only surface
    fs::remove_all(dir);
}

TEST_CASE("absorbing a left-band episode drops curiosity there more than far away") {
    const fs::path dir = fresh_dir("curio_test_band");
    fs::create_directories(dir);
    auto fm = std::make_shared<const FeatureMap>(FeatureMap::make_random(2, {16}, 6, 9));
    const auto before = CuriosityState::fresh(fm, 1e-4, 1e2, 1.0);

    // One episode confined to x in [-1.2, -0.75].
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> xs(-1.2, -0.75);
    std::uniform_real_distribution<double> vs(-0.07, 0.07);
    std::vector<Eigen::VectorXd> episode;
    for (int i = 0; i < 120; ++i) {
        Eigen::VectorXd s(2);
        s << xs(rng), vs(rng);
        episode.push_back(s);
    }
    const auto after = before.absorb_episode(episode);

    const std::string g_before = (dir / "before.csv").string();
    const std::string g_after = (dir / "after.csv").string();
    export_curiosity_surface(before, "mountaincar", 24, g_before);
    export_curiosity_surface(after, "mountaincar", 24, g_after, &episode,
                             (dir / "visited.csv").string());
    CHECK(fs::exists(dir / "visited.csv"));

    const double drop_band = surface_band_mean(g_before, -1.2, -0.75) -
                             surface_band_mean(g_after, -1.2, -0.75);
    const double drop_far = surface_band_mean(g_before, 0.3, 0.6) -
                            surface_band_mean(g_after, 0.3, 0.6);
    CHECK(drop_band > drop_far);
    fs::remove_all(dir);
}

TEST_CASE("surface export rejects environments without a 2-D state") {
    auto fm = std::make_shared<const FeatureMap>(FeatureMap::make_random(6, {8}, 4, 3));
    const auto cs = CuriosityState::fresh(fm, 1e-4, 1e2, 1.0);
    CHECK_THROWS_AS(export_curiosity_surface(cs, "acrobot", 8, "/tmp/never.csv"),
                    unsupported_operation);
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg;
    cfg.env_id = "mountaincar";
    cfg.n_seeds = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n_seeds = 1;
    cfg.env_id = "marscar";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.env_id = "mountaincar";
    cfg.feature_map_path = "/nonexistent/fm.txt";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.feature_map_path.clear();
    CHECK_NOTHROW(cfg.validate());
}
