// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "curio/common.hpp"
#include "curio/env.hpp"

namespace curio {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Independent RNG stream tags per purpose; curiosity machinery draws from
// none of the policy/env/action streams, so an eta = 0 run replays the
// vanilla run exactly.
constexpr std::uint64_t kPolicyStream = 1;
constexpr std::uint64_t kActionStream = 2;
constexpr std::uint64_t kEnvStream = 3;
constexpr std::uint64_t kDemoStream = 4;
constexpr std::uint64_t kEmbedStream = 5;
constexpr std::uint64_t kBcStream = 6;

}  // namespace

void ExperimentConfig::validate() const {
    if (n_seeds < 1) throw std::invalid_argument("ExperimentConfig: n_seeds must be >= 1");
    if (episodes < 1) throw std::invalid_argument("ExperimentConfig: episodes must be >= 1");
    if (smooth_window < 1) throw std::invalid_argument("ExperimentConfig: smooth_window must be >= 1");
    if (eta < 0.0) throw std::invalid_argument("ExperimentConfig: eta must be >= 0");
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("ExperimentConfig: alpha and beta must be > 0");
    }
    if (!feature_map_path.empty() && !fs::exists(feature_map_path)) {
        throw std::invalid_argument("ExperimentConfig: feature map file does not exist: " +
                                    feature_map_path);
    }
    if (!demos_path.empty() && !fs::exists(demos_path)) {
        throw std::invalid_argument("ExperimentConfig: demo file does not exist: " + demos_path);
    }
    make_env(env_id);  // throws on unknown id
}

std::string ExperimentConfig::to_json_string() const {
    json j;
    j["env"] = env_id;
    j["algorithm"] = algorithm;
    j["curiosity"] = curiosity;
    j["eta"] = eta;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["feature_map_path"] = feature_map_path;
    j["demos_path"] = demos_path;
    j["demo_count"] = demo_count;
    j["demo_noise_std"] = demo_noise_std;
    j["embed"] = {{"subset_fraction", embed.subset_fraction},
                  {"minibatch_size", embed.minibatch_size},
                  {"learning_rate", embed.learning_rate},
                  {"l2_weight", embed.l2_weight},
                  {"max_epochs", embed.max_epochs},
                  {"convergence_window", embed.convergence_window},
                  {"convergence_tol", embed.convergence_tol},
                  {"hidden", embed.hidden},
                  {"latent_dim", embed.latent_dim},
                  {"full_residual_weight", embed.full_residual_weight}};
    j["pretrain_policy"] = pretrain_policy;
    j["bc"] = {{"epochs", bc.epochs},
               {"minibatch_size", bc.minibatch_size},
               {"learning_rate", bc.learning_rate}};
    j["rl"] = {{"gamma", rl.gamma},
               {"learning_rate", rl.learning_rate},
               {"batch_episodes", rl.batch_episodes},
               {"standardize_returns", rl.standardize_returns}};
    j["policy"] = {{"hidden", policy.hidden},
                   {"log_std_init", policy.log_std_init},
                   {"log_std_min", policy.log_std_min},
                   {"log_std_max", policy.log_std_max}};
    j["n_seeds"] = n_seeds;
    j["seed_base"] = seed_base;
    j["episodes"] = episodes;
    j["smooth_window"] = smooth_window;
    j["dump_trajectories"] = dump_trajectories;
    j["save_policies"] = save_policies;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Curve and trajectory CSV

void save_curve_csv(const LearningCurve& curve, std::ostream& out) {
    out << "episode,timesteps,mean_extrinsic,mean_curiosity,success_flag\n";
    for (const auto& r : curve.rows) {
        out << r.episode << ',' << r.timesteps << ',' << fmt_double(r.mean_extrinsic) << ','
            << fmt_double(r.mean_curiosity) << ',' << r.success << '\n';
    }
}

void save_curve_csv(const LearningCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_curve_csv: cannot open " + path);
    save_curve_csv(curve, out);
}

LearningCurve load_curve_csv(std::istream& in) {
    LearningCurve curve;
    std::string line;
    if (!std::getline(in, line) || line != "episode,timesteps,mean_extrinsic,mean_curiosity,success_flag") {
        throw std::invalid_argument("load_curve_csv: bad header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        CurveRow r;
        std::getline(row, field, ',');
        r.episode = std::stoi(field);
        std::getline(row, field, ',');
        r.timesteps = std::stol(field);
        std::getline(row, field, ',');
        r.mean_extrinsic = parse_double(field);
        std::getline(row, field, ',');
        r.mean_curiosity = parse_double(field);
        std::getline(row, field, ',');
        r.success = std::stoi(field);
        curve.rows.push_back(r);
    }
    return curve;
}

LearningCurve load_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_curve_csv: cannot open " + path);
    return load_curve_csv(in);
}

void save_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    if (traj.steps.empty()) {
        out << "t\n";
        return;
    }
    const long obs_dim = traj.steps.front().obs.size();
    const long act_dim = traj.steps.front().action.size();
    out << 't';
    for (long j = 0; j < obs_dim; ++j) out << ",obs_" << j;
    for (long j = 0; j < act_dim; ++j) out << ",act_" << j;
    out << ",e,c,r\n";
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
        const auto& s = traj.steps[t];
        out << t;
        for (long j = 0; j < obs_dim; ++j) out << ',' << fmt_double(s.obs[j]);
        for (long j = 0; j < act_dim; ++j) out << ',' << fmt_double(s.action[j]);
        out << ',' << fmt_double(s.extrinsic) << ',' << fmt_double(s.curiosity) << ','
            << fmt_double(s.combined) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Statistics

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty input");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q must be in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

std::vector<double> smooth(const std::vector<double>& values, int window) {
    if (window < 1) throw std::invalid_argument("smooth: window must be >= 1");
    std::vector<double> out(values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += values[i];
        if (i >= static_cast<std::size_t>(window)) acc -= values[i - window];
        const double len = static_cast<double>(std::min<std::size_t>(i + 1, window));
        out[i] = acc / len;
    }
    return out;
}

MetricCurve metric_curve(const LearningCurve& curve, const std::string& metric) {
    MetricCurve out;
    out.metric = metric;
    out.points.reserve(curve.rows.size());
    for (const auto& r : curve.rows) {
        double v = 0.0;
        if (metric == "mean_extrinsic") {
            v = r.mean_extrinsic;
        } else if (metric == "mean_curiosity") {
            v = r.mean_curiosity;
        } else {
            throw std::invalid_argument("metric_curve: unknown metric '" + metric + "'");
        }
        out.points.push_back({r.timesteps, v});
    }
    return out;
}

namespace {

struct SmoothedCurve {
    std::vector<long> timesteps;
    std::vector<double> values;
};

SmoothedCurve smooth_curve(const MetricCurve& c, int window) {
    SmoothedCurve out;
    std::vector<double> raw;
    raw.reserve(c.points.size());
    for (const auto& p : c.points) {
        out.timesteps.push_back(p.timesteps);
        raw.push_back(p.value);
    }
    out.values = smooth(raw, window);
    return out;
}

// First index whose value reaches `level` (within a tiny float slack).
std::optional<std::size_t> first_reach(const std::vector<double>& values, double level) {
    const double slack = 1e-12 * std::max(1.0, std::abs(level));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= level - slack) return i;
    }
    return std::nullopt;
}

}  // namespace

SpeedupResult compute_speedup(const MetricCurve& curiosity_curve,
                              const MetricCurve& baseline_curve, int smooth_window) {
    if (curiosity_curve.points.empty() || baseline_curve.points.empty()) {
        throw std::invalid_argument("compute_speedup: empty curve");
    }
    if (curiosity_curve.metric != baseline_curve.metric) {
        throw std::invalid_argument("compute_speedup: metric mismatch ('" +
                                    curiosity_curve.metric + "' vs '" + baseline_curve.metric +
                                    "')");
    }
    const SmoothedCurve cur = smooth_curve(curiosity_curve, smooth_window);
    const SmoothedCurve base = smooth_curve(baseline_curve, smooth_window);

    const double base_best = *std::max_element(base.values.begin(), base.values.end());
    const std::size_t base_best_at = *first_reach(base.values, base_best);

    SpeedupResult out;
    if (const auto match = first_reach(cur.values, base_best)) {
        out.inverted = false;
        out.ratio = static_cast<double>(base.timesteps[base_best_at]) /
                    static_cast<double>(cur.timesteps[*match]);
        return out;
    }
    // Curiosity never matched the baseline's best: invert the definition.
    const double cur_best = *std::max_element(cur.values.begin(), cur.values.end());
    const std::size_t cur_best_at = *first_reach(cur.values, cur_best);
    const auto base_match = first_reach(base.values, cur_best);
    if (!base_match) {
        throw std::invalid_argument("compute_speedup: curves never intersect either best level");
    }
    out.inverted = true;
    out.ratio = static_cast<double>(cur.timesteps[cur_best_at]) /
                static_cast<double>(base.timesteps[*base_match]);
    return out;
}

// ---------------------------------------------------------------------------
// Seed runs

SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    SeedResult result;
    result.seed = seed;
    result.min_curiosity = std::numeric_limits<double>::infinity();

    auto env = make_env(cfg.env_id);
    const EnvSpec& spec = env->spec();

    GaussianPolicy policy =
        GaussianPolicy::make(spec.obs_dim, spec.action_dim, cfg.policy,
                             mix_seed(seed, kPolicyStream), spec.action_high, spec.obs_scale);

    std::optional<DemoSet> demos;
    auto demo_source = [&]() -> const DemoSet& {
        if (!demos) {
            demos = cfg.demos_path.empty()
                        ? generate_demos(cfg.env_id, cfg.demo_count, cfg.demo_noise_std,
                                         mix_seed(seed, kDemoStream))
                        : load_demos_csv(cfg.demos_path);
        }
        return *demos;
    };

    if (cfg.pretrain_policy) {
        BcConfig bc = cfg.bc;
        bc.seed = mix_seed(seed, kBcStream);
        pretrain_bc(policy, demo_source(), bc);
    }
    auto alg = make_algorithm(cfg.algorithm, std::move(policy), cfg.rl);

    std::optional<CuriosityState> cs;
    if (cfg.curiosity) {
        std::shared_ptr<const FeatureMap> fm;
        if (!cfg.feature_map_path.empty()) {
            fm = std::make_shared<FeatureMap>(FeatureMap::load(cfg.feature_map_path));
        } else {
            EmbedTrainConfig embed_cfg = cfg.embed;
            embed_cfg.alpha = cfg.alpha;
            embed_cfg.beta = cfg.beta;
            embed_cfg.seed = mix_seed(seed, kEmbedStream);
            fm = std::make_shared<FeatureMap>(
                train_embedding(demo_source(), embed_cfg).feature_map);
        }
        if (fm->input_dim() != spec.obs_dim) {
            throw std::invalid_argument("run_seed: feature map does not match observation space");
        }
        cs = CuriosityState::fresh(fm, cfg.alpha, cfg.beta, cfg.eta);
    }

    std::mt19937_64 action_rng(mix_seed(seed, kActionStream));
    const std::uint64_t env_stream = mix_seed(seed, kEnvStream);

    fs::path traj_dir;
    if (cfg.dump_trajectories) {
        traj_dir = fs::path(cfg.out_dir) / "trajectories";
        fs::create_directories(traj_dir);
    }

    long cumulative_steps = 0;
    for (int ep = 0; ep < cfg.episodes; ++ep) {
        Eigen::VectorXd obs = env->reset(mix_seed(env_stream, static_cast<std::uint64_t>(ep)));
        std::vector<Eigen::VectorXd> episode_obs{obs};
        Trajectory traj;
        bool success = false;

        while (true) {
            auto [action, log_prob] = alg->policy().sample_action(obs, action_rng);
            const Eigen::VectorXd clipped =
                action.cwiseMax(spec.action_low).cwiseMin(spec.action_high);
            const StepResult sr = env->step(clipped);

            StepRecord rec;
            rec.obs = obs;
            rec.action = action;
            rec.extrinsic = sr.extrinsic_reward;
            rec.log_prob = log_prob;
            if (cs) {
                rec.curiosity = cs->curiosity_reward(sr.observation);
                rec.combined = sr.extrinsic_reward + cs->eta() * rec.curiosity;
                result.min_curiosity = std::min(result.min_curiosity, rec.curiosity);
                ++result.curiosity_samples;
            } else {
                rec.curiosity = 0.0;
                rec.combined = sr.extrinsic_reward;
            }
            traj.steps.push_back(std::move(rec));

            success = success || env->success_step(sr);
            obs = sr.observation;
            episode_obs.push_back(obs);
            if (sr.terminal || sr.truncated) break;
        }

        cumulative_steps += traj.size();

        CurveRow row;
        row.episode = ep;
        row.timesteps = cumulative_steps;
        const double steps = static_cast<double>(traj.size());
        double sum_e = 0.0, sum_i = 0.0;
        for (const auto& s : traj.steps) {
            sum_e += s.extrinsic;
            sum_i += s.combined - s.extrinsic;  // intrinsic part as applied
        }
        row.mean_extrinsic = sum_e / steps;
        row.mean_curiosity = sum_i / steps;
        row.success = success ? 1 : 0;
        result.curve.rows.push_back(row);

        if (success && !result.timesteps_to_first_success) {
            result.timesteps_to_first_success = cumulative_steps;
        }

        if (cfg.dump_trajectories) {
            std::ostringstream name;
            name << "seed" << seed << "_ep" << ep << ".csv";
            std::ofstream out(traj_dir / name.str());
            save_trajectory_csv(traj, out);
        }

        if (cs) {
            cs = cs->absorb_episode(episode_obs);
        }
        alg->on_episode(std::move(traj));
    }

    if (result.curiosity_samples == 0) result.min_curiosity = 0.0;
    result.final_policy = alg->policy();
    return result;
}

namespace {

SeedResult run_seed_catching(const ExperimentConfig& cfg, std::uint64_t seed) {
    try {
        return run_seed(cfg, seed);
    } catch (const std::exception& e) {
        SeedResult r;
        r.seed = seed;
        r.failed = true;
        r.error = e.what();
        return r;
    }
}

json summary_to_json(const RunSummary& s, const std::vector<SeedResult>& seeds) {
    json j;
    j["median"] = s.median;
    j["q25"] = s.q25;
    j["q75"] = s.q75;
    j["successes"] = s.successes;
    j["failed_seeds"] = s.failed_seeds;
    j["partial"] = s.partial;
    j["min_curiosity"] = s.min_curiosity;
    j["curiosity_samples"] = s.curiosity_samples;
    if (s.speedup) {
        j["speedup"] = *s.speedup;
        j["speedup_inverted"] = *s.speedup_inverted;
    }
    json per_seed = json::array();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        json e;
        e["seed"] = seeds[i].seed;
        e["failed"] = seeds[i].failed;
        if (seeds[i].failed) {
            e["error"] = seeds[i].error;
        } else {
            e["final_reward"] = s.final_rewards.size() > i ? json(s.final_rewards[i]) : json();
            e["timesteps_to_peak"] = s.timesteps_to_peak.size() > i ? json(s.timesteps_to_peak[i]) : json();
            e["min_curiosity"] = seeds[i].min_curiosity;
            e["curiosity_samples"] = seeds[i].curiosity_samples;
            if (seeds[i].timesteps_to_first_success) {
                e["timesteps_to_first_success"] = *seeds[i].timesteps_to_first_success;
            } else {
                e["timesteps_to_first_success"] = nullptr;
            }
        }
        per_seed.push_back(e);
    }
    j["per_seed"] = per_seed;
    return j;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg, std::vector<SeedResult>* seed_results) {
    cfg.validate();
    if (cfg.out_dir.empty()) throw std::invalid_argument("run_experiment: out_dir is required");
    fs::create_directories(cfg.out_dir);
    {
        std::ofstream out(fs::path(cfg.out_dir) / "config.json");
        out << cfg.to_json_string();
    }

    std::vector<SeedResult> results(static_cast<std::size_t>(cfg.n_seeds));
    {
        int n_threads = cfg.threads > 0
                            ? cfg.threads
                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        n_threads = std::min(n_threads, cfg.n_seeds);
        std::atomic<int> next{0};
        auto worker = [&]() {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= cfg.n_seeds) break;
                results[static_cast<std::size_t>(i)] =
                    run_seed_catching(cfg, cfg.seed_base + static_cast<std::uint64_t>(i));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    RunSummary summary;
    summary.min_curiosity = std::numeric_limits<double>::infinity();
    std::vector<std::string> curve_files;
    for (const auto& r : results) {
        summary.seeds.push_back(r.seed);
        if (r.failed) {
            ++summary.failed_seeds;
            continue;
        }
        std::ostringstream name;
        name << "seed_" << r.seed << ".csv";
        save_curve_csv(r.curve, (fs::path(cfg.out_dir) / name.str()).string());
        curve_files.push_back(name.str());
        if (cfg.save_policies) {
            std::ofstream pol_out(fs::path(cfg.out_dir) /
                                  ("policy_seed_" + std::to_string(r.seed) + ".txt"));
            r.final_policy.save(pol_out);
        }

        std::vector<double> metric;
        metric.reserve(r.curve.rows.size());
        bool any_success = false;
        for (const auto& row : r.curve.rows) {
            metric.push_back(row.mean_extrinsic);
            any_success = any_success || row.success != 0;
        }
        const auto smoothed = smooth(metric, cfg.smooth_window);
        summary.final_rewards.push_back(smoothed.back());
        const double peak = *std::max_element(smoothed.begin(), smoothed.end());
        const std::size_t peak_at = *first_reach(smoothed, peak);
        summary.timesteps_to_peak.push_back(r.curve.rows[peak_at].timesteps);
        if (any_success) ++summary.successes;
        if (r.curiosity_samples > 0) {
            summary.min_curiosity = std::min(summary.min_curiosity, r.min_curiosity);
            summary.curiosity_samples += r.curiosity_samples;
        }
    }
    if (summary.curiosity_samples == 0) summary.min_curiosity = 0.0;
    summary.partial = summary.failed_seeds > 0;
    if (!summary.final_rewards.empty()) {
        summary.median = quantile(summary.final_rewards, 0.5);
        summary.q25 = quantile(summary.final_rewards, 0.25);
        summary.q75 = quantile(summary.final_rewards, 0.75);
    } else {
        summary.median = summary.q25 = summary.q75 = std::numeric_limits<double>::quiet_NaN();
    }

    {
        std::ofstream out(fs::path(cfg.out_dir) / "summary.json");
        out << summary_to_json(summary, results).dump(2) << '\n';
    }
    {
        json manifest;
        manifest["format"] = "curio-experiment v1";
        manifest["config"] = "config.json";
        manifest["summary"] = "summary.json";
        manifest["curves"] = curve_files;
        std::ofstream out(fs::path(cfg.out_dir) / "manifest.json");
        out << manifest.dump(2) << '\n';
    }

    if (seed_results) *seed_results = std::move(results);
    return summary;
}

// ---------------------------------------------------------------------------
// Compare

namespace {

// Pointwise median across seeds at each episode index.
MetricCurve median_curve(const std::vector<SeedResult>& seeds) {
    MetricCurve out;
    out.metric = "mean_extrinsic";
    std::size_t episodes = 0;
    for (const auto& s : seeds) {
        if (!s.failed) episodes = std::max(episodes, s.curve.rows.size());
    }
    for (std::size_t e = 0; e < episodes; ++e) {
        std::vector<double> ts, vals;
        for (const auto& s : seeds) {
            if (s.failed || s.curve.rows.size() <= e) continue;
            ts.push_back(static_cast<double>(s.curve.rows[e].timesteps));
            vals.push_back(s.curve.rows[e].mean_extrinsic);
        }
        if (ts.empty()) break;
        out.points.push_back({static_cast<long>(std::llround(quantile(ts, 0.5))),
                              quantile(vals, 0.5)});
    }
    return out;
}

std::optional<double> median_tts(const std::vector<SeedResult>& seeds) {
    std::vector<double> values;
    for (const auto& s : seeds) {
        if (s.failed) continue;
        values.push_back(s.timesteps_to_first_success
                             ? static_cast<double>(*s.timesteps_to_first_success)
                             : std::numeric_limits<double>::infinity());
    }
    if (values.empty()) return std::nullopt;
    const double med = quantile(values, 0.5);
    if (!std::isfinite(med)) return std::nullopt;
    return med;
}

}  // namespace

CompareSummary compare_experiment(const ExperimentConfig& base_cfg) {
    if (base_cfg.out_dir.empty()) {
        throw std::invalid_argument("compare_experiment: out_dir is required");
    }
    fs::create_directories(base_cfg.out_dir);

    ExperimentConfig vanilla_cfg = base_cfg;
    vanilla_cfg.curiosity = false;
    vanilla_cfg.out_dir = (fs::path(base_cfg.out_dir) / "vanilla").string();

    ExperimentConfig curiosity_cfg = base_cfg;
    curiosity_cfg.curiosity = true;
    curiosity_cfg.out_dir = (fs::path(base_cfg.out_dir) / "curiosity").string();

    CompareSummary out;
    std::vector<SeedResult> vanilla_seeds, curiosity_seeds;
    out.vanilla = run_experiment(vanilla_cfg, &vanilla_seeds);
    out.curiosity = run_experiment(curiosity_cfg, &curiosity_seeds);

    const MetricCurve vanilla_med = median_curve(vanilla_seeds);
    const MetricCurve curiosity_med = median_curve(curiosity_seeds);
    out.speedup = compute_speedup(curiosity_med, vanilla_med, base_cfg.smooth_window);
    out.curiosity.speedup = out.speedup.ratio;
    out.curiosity.speedup_inverted = out.speedup.inverted;
    out.vanilla_median_tts = median_tts(vanilla_seeds);
    out.curiosity_median_tts = median_tts(curiosity_seeds);

    json j;
    j["speedup"] = out.speedup.ratio;
    j["speedup_inverted"] = out.speedup.inverted;
    j["vanilla"] = summary_to_json(out.vanilla, vanilla_seeds);
    j["curiosity"] = summary_to_json(out.curiosity, curiosity_seeds);
    j["vanilla_median_timesteps_to_first_success"] =
        out.vanilla_median_tts ? json(*out.vanilla_median_tts) : json();
    j["curiosity_median_timesteps_to_first_success"] =
        out.curiosity_median_tts ? json(*out.curiosity_median_tts) : json();
    std::ofstream summary_out(fs::path(base_cfg.out_dir) / "compare_summary.json");
    summary_out << j.dump(2) << '\n';

    json manifest;
    manifest["format"] = "curio-compare v1";
    manifest["summary"] = "compare_summary.json";
    manifest["arms"] = {"vanilla", "curiosity"};
    std::ofstream manifest_out(fs::path(base_cfg.out_dir) / "manifest.json");
    manifest_out << manifest.dump(2) << '\n';

    return out;
}

// ---------------------------------------------------------------------------
// Curiosity surface (Fig.-style export)

void export_curiosity_surface(const CuriosityState& cs, const std::string& env_id,
                              int resolution, const std::string& grid_csv_path,
                              const std::vector<Eigen::VectorXd>* visited,
                              const std::string& visited_csv_path) {
    if (resolution < 2) throw std::invalid_argument("export_curiosity_surface: resolution < 2");
    auto env = make_env(env_id);
    if (env->spec().state_dim != 2) {
        throw unsupported_operation("export_curiosity_surface: state space of '" + env_id +
                                    "' is not 2-D");
    }

    double x_lo, x_hi, y_lo, y_hi;
    if (env_id == "mountaincar") {
        x_lo = -1.2;
        x_hi = 0.6;
        y_lo = -0.07;
        y_hi = 0.07;
    } else if (env_id == "pendulum") {
        x_lo = -3.14159265358979323846;
        x_hi = 3.14159265358979323846;
        y_lo = -8.0;
        y_hi = 8.0;
    } else {
        throw unsupported_operation("export_curiosity_surface: no state box for '" + env_id + "'");
    }

    env->reset(0);
    std::ofstream out(grid_csv_path);
    if (!out) throw std::invalid_argument("export_curiosity_surface: cannot open " + grid_csv_path);
    out << "position,velocity,curiosity\n";
    for (int i = 0; i < resolution; ++i) {
        const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double y = y_lo + (y_hi - y_lo) * static_cast<double>(j) / (resolution - 1);
            Eigen::VectorXd state(2);
            state << x, y;
            env->set_state(state);
            const double c = cs.curiosity_reward(env->observe());
            out << fmt_double(x) << ',' << fmt_double(y) << ',' << fmt_double(c) << '\n';
        }
    }

    if (visited && !visited_csv_path.empty()) {
        std::ofstream vout(visited_csv_path);
        if (!vout) {
            throw std::invalid_argument("export_curiosity_surface: cannot open " + visited_csv_path);
        }
        vout << "position,velocity\n";
        for (const auto& s : *visited) {
            vout << fmt_double(s[0]) << ',' << fmt_double(s[1]) << '\n';
        }
    }
}

double surface_band_mean(const std::string& grid_csv_path, double x_lo, double x_hi) {
    std::ifstream in(grid_csv_path);
    if (!in) throw std::invalid_argument("surface_band_mean: cannot open " + grid_csv_path);
    std::string line;
    std::getline(in, line);  // header
    double sum = 0.0;
    long count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string xs, ys, cs;
        std::getline(row, xs, ',');
        std::getline(row, ys, ',');
        std::getline(row, cs, ',');
        const double x = parse_double(xs);
        if (x < x_lo || x > x_hi) continue;
        sum += parse_double(cs);
        ++count;
    }
    if (count == 0) throw std::invalid_argument("surface_band_mean: empty band");
    return sum / static_cast<double>(count);
}

}  // namespace curio
