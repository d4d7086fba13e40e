// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: demos | embed | train | compare | surface.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curio/common.hpp"
#include "curio/demos.hpp"
#include "curio/embedding.hpp"
#include "curio/env.hpp"
#include "curio/experts.hpp"
#include "curio/harness.hpp"

namespace fs = std::filesystem;
using curio::ExperimentConfig;

namespace {

void add_embed_options(CLI::App* cmd, curio::EmbedTrainConfig& cfg) {
    cmd->add_option("--latent", cfg.latent_dim, "latent feature count (bias feature excluded)");
    cmd->add_option("--hidden", cfg.hidden, "hidden layer widths");
    cmd->add_option("--init-scale", cfg.init_weight_scale, "weight init scale (locality knob)");
    cmd->add_option("--subset-fraction", cfg.subset_fraction, "conditioning subset fraction per epoch");
    cmd->add_option("--minibatch", cfg.minibatch_size, "minibatch size");
    cmd->add_option("--embed-lr", cfg.learning_rate, "embedding learning rate");
    cmd->add_option("--l2", cfg.l2_weight, "l2 regularization weight");
    cmd->add_option("--epochs", cfg.max_epochs, "max training epochs");
    cmd->add_option("--window", cfg.convergence_window, "convergence window (epochs)");
    cmd->add_option("--tol", cfg.convergence_tol, "convergence tolerance on the windowed NLL");
    cmd->add_flag("--full-residual-loss", cfg.full_residual_weight,
                  "use the residual term without the 1/2 factor");
}

void add_experiment_options(CLI::App* cmd, ExperimentConfig& cfg, bool with_curiosity_flag) {
    cmd->add_option("--env", cfg.env_id, "environment id")->required();
    cmd->add_option("--algorithm", cfg.algorithm, "rl algorithm id");
    cmd->add_option("--episodes", cfg.episodes, "episodes per seed");
    cmd->add_option("--n-seeds", cfg.n_seeds, "number of seeds");
    cmd->add_option("--seed-base", cfg.seed_base, "first seed")->required();
    cmd->add_option("--out-dir", cfg.out_dir, "output directory")->required();
    if (with_curiosity_flag) {
        cmd->add_flag("--curiosity", cfg.curiosity, "enable the intrinsic reward");
    }
    cmd->add_option("--eta", cfg.eta, "curiosity weight");
    cmd->add_option("--alpha", cfg.alpha, "weight precision");
    cmd->add_option("--beta", cfg.beta, "noise precision");
    cmd->add_option("--feature-map", cfg.feature_map_path, "frozen feature map file");
    cmd->add_option("--demos", cfg.demos_path, "demo CSV for embedding training");
    cmd->add_option("--demo-count", cfg.demo_count, "generated demo rows when no --demos given");
    cmd->add_option("--demo-noise-std", cfg.demo_noise_std, "expert action noise");
    cmd->add_flag("--pretrain-bc", cfg.pretrain_policy,
                  "behavior-clone the policy mean onto the demos before RL");
    cmd->add_option("--bc-epochs", cfg.bc.epochs, "behavior cloning epochs");
    cmd->add_option("--gamma", cfg.rl.gamma, "discount factor");
    cmd->add_option("--lr", cfg.rl.learning_rate, "policy learning rate");
    cmd->add_option("--batch-episodes", cfg.rl.batch_episodes, "episodes per policy update");
    cmd->add_flag("--no-standardize", [&cfg](std::int64_t) { cfg.rl.standardize_returns = false; },
                  "disable per-batch return standardization");
    cmd->add_option("--smooth-window", cfg.smooth_window, "episodes in the smoothing window");
    cmd->add_flag("--dump-trajectories", cfg.dump_trajectories, "write per-episode trajectory CSVs");
    cmd->add_option("--threads", cfg.threads, "parallel seed workers (0 = all cores)");
    add_embed_options(cmd, cfg.embed);
}

int run_demos(const std::string& env_id, long n, double noise_std, std::uint64_t seed,
              const std::string& out_path) {
    const curio::DemoSet demos = curio::generate_demos(env_id, n, noise_std, seed);
    curio::save_demos_csv(demos, out_path);
    std::cout << "wrote " << demos.rows() << " demo rows to " << out_path << "\n";
    return 0;
}

int run_embed(const std::string& demos_path, const std::string& out_path,
              curio::EmbedTrainConfig cfg, double alpha, double beta, std::uint64_t seed) {
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.seed = seed;
    const curio::DemoSet demos = curio::load_demos_csv(demos_path);
    const curio::EmbedTrainResult result = curio::train_embedding(demos, cfg);
    result.feature_map.save(out_path);
    std::cout << "trained feature map on " << demos.rows() << " rows for " << result.epochs_run
              << " epochs";
    if (!result.epoch_nll.empty()) std::cout << ", final NLL " << result.epoch_nll.back();
    std::cout << ", saved to " << out_path << "\n";
    return 0;
}

int run_train(const ExperimentConfig& cfg) {
    std::vector<curio::SeedResult> seeds;
    const curio::RunSummary summary = curio::run_experiment(cfg, &seeds);
    std::cout << "env=" << cfg.env_id << " curiosity=" << (cfg.curiosity ? "on" : "off")
              << " seeds=" << cfg.n_seeds << "\n";
    std::cout << "median final reward " << summary.median << " (q25 " << summary.q25 << ", q75 "
              << summary.q75 << "), successes " << summary.successes << "/" << cfg.n_seeds << "\n";
    if (summary.partial) {
        std::cout << "WARNING: " << summary.failed_seeds << " seed(s) failed; results are partial\n";
        for (const auto& s : seeds) {
            if (s.failed) std::cout << "  seed " << s.seed << ": " << s.error << "\n";
        }
    }
    std::cout << "outputs in " << cfg.out_dir << "\n";
    return summary.partial ? 1 : 0;
}

int run_compare(const ExperimentConfig& cfg) {
    const curio::CompareSummary cmp = curio::compare_experiment(cfg);
    std::cout << "vanilla   median " << cmp.vanilla.median << " successes " << cmp.vanilla.successes
              << "/" << cfg.n_seeds << "\n";
    std::cout << "curiosity median " << cmp.curiosity.median << " successes "
              << cmp.curiosity.successes << "/" << cfg.n_seeds << "\n";
    std::cout << "speedup " << cmp.speedup.ratio << (cmp.speedup.inverted ? " (inverted)" : "")
              << "\n";
    std::cout << "outputs in " << cfg.out_dir << "\n";
    return (cmp.vanilla.partial || cmp.curiosity.partial) ? 1 : 0;
}

int run_surface(const std::string& feature_map_path, const std::string& env_id, int resolution,
                const std::string& out_dir, double alpha, double beta, double eta,
                const std::string& absorb, std::uint64_t seed) {
    fs::create_directories(out_dir);
    auto fm = std::make_shared<curio::FeatureMap>(curio::FeatureMap::load(feature_map_path));
    curio::CuriosityState cs = curio::CuriosityState::fresh(fm, alpha, beta, eta);

    const std::string before = (fs::path(out_dir) / "surface_before.csv").string();
    curio::export_curiosity_surface(cs, env_id, resolution, before);
    std::cout << "wrote " << before << "\n";

    std::vector<Eigen::VectorXd> visited;
    if (absorb == "expert") {
        auto env = curio::make_env(env_id);
        Eigen::VectorXd obs = env->reset(seed);
        visited.push_back(env->state());
        std::vector<Eigen::VectorXd> episode_obs{obs};
        while (true) {
            const curio::StepResult r = env->step(curio::expert_action(env_id, env->state()));
            episode_obs.push_back(r.observation);
            visited.push_back(env->state());
            if (r.terminal || r.truncated) break;
        }
        cs = cs.absorb_episode(episode_obs);
    } else if (!absorb.empty()) {
        const curio::DemoSet demos = curio::load_demos_csv(absorb);
        std::vector<Eigen::VectorXd> episode_obs;
        for (long i = 0; i < demos.rows(); ++i) {
            episode_obs.push_back(demos.X.row(i).transpose());
            visited.push_back(demos.X.row(i).transpose());
        }
        cs = cs.absorb_episode(episode_obs);
    } else {
        return 0;
    }

    const std::string after = (fs::path(out_dir) / "surface_after.csv").string();
    const std::string visited_path = (fs::path(out_dir) / "visited.csv").string();
    curio::export_curiosity_surface(cs, env_id, resolution, after, &visited, visited_path);
    std::cout << "wrote " << after << " and " << visited_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curiosity-driven exploration toolkit"};
    app.require_subcommand(1);

    // demos
    std::string demos_env, demos_out;
    long demos_n = 2000;
    double demos_noise = 0.1;
    std::uint64_t demos_seed = 0;
    auto* demos_cmd = app.add_subcommand("demos", "generate scripted-expert demonstrations");
    demos_cmd->add_option("--env", demos_env, "environment id")->required();
    demos_cmd->add_option("--n", demos_n, "number of rows");
    demos_cmd->add_option("--noise-std", demos_noise, "gaussian action noise");
    demos_cmd->add_option("--seed", demos_seed, "rng seed");
    demos_cmd->add_option("--out", demos_out, "output CSV")->required();

    // embed
    std::string embed_demos, embed_out;
    curio::EmbedTrainConfig embed_cfg;
    double embed_alpha = 1e-4, embed_beta = 1e2;
    std::uint64_t embed_seed = 0;
    auto* embed_cmd = app.add_subcommand("embed", "train the latent feature map on demos");
    embed_cmd->add_option("--demos", embed_demos, "demo CSV")->required();
    embed_cmd->add_option("--out", embed_out, "output feature-map file")->required();
    embed_cmd->add_option("--alpha", embed_alpha, "weight precision");
    embed_cmd->add_option("--beta", embed_beta, "noise precision");
    embed_cmd->add_option("--seed", embed_seed, "rng seed");
    add_embed_options(embed_cmd, embed_cfg);

    // train
    ExperimentConfig train_cfg;
    auto* train_cmd = app.add_subcommand("train", "run seeded RL (optionally with curiosity)");
    add_experiment_options(train_cmd, train_cfg, /*with_curiosity_flag=*/true);

    // compare
    ExperimentConfig compare_cfg;
    auto* compare_cmd =
        app.add_subcommand("compare", "run vanilla and curiosity arms and compute the speedup");
    add_experiment_options(compare_cmd, compare_cfg, /*with_curiosity_flag=*/false);

    // surface
    std::string surf_fm, surf_env = "mountaincar", surf_out, surf_absorb = "expert";
    int surf_res = 64;
    double surf_alpha = 1e-4, surf_beta = 1e2, surf_eta = 1.0;
    std::uint64_t surf_seed = 0;
    auto* surf_cmd = app.add_subcommand("surface", "export the curiosity reward surface");
    surf_cmd->add_option("--feature-map", surf_fm, "frozen feature map file")->required();
    surf_cmd->add_option("--env", surf_env, "environment id (2-D state space)");
    surf_cmd->add_option("--resolution", surf_res, "grid resolution per axis");
    surf_cmd->add_option("--out-dir", surf_out, "output directory")->required();
    surf_cmd->add_option("--alpha", surf_alpha, "weight precision");
    surf_cmd->add_option("--beta", surf_beta, "noise precision");
    surf_cmd->add_option("--eta", surf_eta, "curiosity weight");
    surf_cmd->add_option("--absorb", surf_absorb,
                         "'expert' for one scripted episode, a CSV of observations, or '' for none");
    surf_cmd->add_option("--seed", surf_seed, "seed for the expert episode");

    CLI11_PARSE(app, argc, argv);

    try {
        if (demos_cmd->parsed()) {
            return run_demos(demos_env, demos_n, demos_noise, demos_seed, demos_out);
        }
        if (embed_cmd->parsed()) {
            return run_embed(embed_demos, embed_out, embed_cfg, embed_alpha, embed_beta, embed_seed);
        }
        if (train_cmd->parsed()) {
            return run_train(train_cfg);
        }
        if (compare_cmd->parsed()) {
            return run_compare(compare_cfg);
        }
        if (surf_cmd->parsed()) {
            return run_surface(surf_fm, surf_env, surf_res, surf_out, surf_alpha, surf_beta,
                               surf_eta, surf_absorb, surf_seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
