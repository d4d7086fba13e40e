// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "curio/policy.hpp"
#include "curio/reinforce.hpp"
#include "oracles.hpp"

using namespace curio;

namespace {

Eigen::VectorXd random_vec(long n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
}

Trajectory make_trajectory(const GaussianPolicy& pol, int len, std::mt19937_64& rng,
                           double reward) {
    Trajectory traj;
    for (int t = 0; t < len; ++t) {
        StepRecord rec;
        rec.obs = random_vec(pol.obs_dim(), rng);
        auto [action, lp] = pol.sample_action(rec.obs, rng);
        rec.action = action;
        rec.log_prob = lp;
        rec.extrinsic = reward;
        rec.curiosity = 0.0;
        rec.combined = reward;
        traj.steps.push_back(std::move(rec));
    }
    return traj;
}

double surrogate(const GaussianPolicy& pol, const std::vector<Trajectory>& batch,
                 const std::vector<Eigen::VectorXd>& advantages) {
    double j = 0.0;
    for (std::size_t e = 0; e < batch.size(); ++e) {
        for (long t = 0; t < batch[e].size(); ++t) {
            const auto& s = batch[e].steps[static_cast<std::size_t>(t)];
            j += pol.log_prob(s.obs, s.action) * advantages[e][t];
        }
    }
    return j;
}

}  // namespace

TEST_CASE("sampled actions collapse onto the mean at the log_std floor") {
    PolicyConfig cfg;
    cfg.log_std_init = -10.0;
    const GaussianPolicy pol = GaussianPolicy::make(3, 2, cfg, 1);
    std::mt19937_64 rng(2);
    const Eigen::VectorXd obs = random_vec(3, rng);
    const auto [action, lp] = pol.sample_action(obs, rng);
    CHECK((action - pol.mean(obs)).cwiseAbs().maxCoeff() < 1e-3);
    CHECK(std::isfinite(lp));
}

TEST_CASE("log_prob matches the closed-form diagonal gaussian density") {
    PolicyConfig cfg;
    cfg.log_std_init = -0.3;
    const GaussianPolicy pol = GaussianPolicy::make(4, 3, cfg, 5);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) {
        const Eigen::VectorXd obs = random_vec(4, rng);
        const Eigen::VectorXd action = random_vec(3, rng, 2.0);
        const Eigen::VectorXd mu = pol.mean(obs);
        double want = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double ls = pol.log_std()[j];
            const double var = std::exp(2.0 * ls);
            want += -0.5 * std::log(2.0 * std::numbers::pi) - ls -
                    (action[j] - mu[j]) * (action[j] - mu[j]) / (2.0 * var);
        }
        CHECK(pol.log_prob(obs, action) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("sampling is reproducible under a fixed rng") {
    const GaussianPolicy pol = GaussianPolicy::make(3, 2, {}, 9);
    std::mt19937_64 a(42), b(42);
    const Eigen::VectorXd obs = Eigen::VectorXd::Constant(3, 0.2);
    const auto ra = pol.sample_action(obs, a);
    const auto rb = pol.sample_action(obs, b);
    CHECK((ra.first.array() == rb.first.array()).all());
    CHECK(ra.second == rb.second);
}

TEST_CASE("discounted returns: closed form and brute-force oracle") {
    const Eigen::VectorXd g = discounted_returns({1.0, 1.0, 1.0}, 0.5);
    CHECK(g[0] == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(g[2] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(discounted_returns({1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(discounted_returns({1.0}, 1.0), std::invalid_argument);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> rewards(57);
    for (auto& r : rewards) r = gauss(rng);
    const double gamma = 0.97;
    const Eigen::VectorXd got = discounted_returns(rewards, gamma);
    for (std::size_t t = 0; t < rewards.size(); ++t) {
        double want = 0.0;  // O(H^2) double loop
        for (std::size_t k = t; k < rewards.size(); ++k) {
            want += std::pow(gamma, static_cast<double>(k - t)) * rewards[k];
        }
        CHECK(got[static_cast<long>(t)] == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("equal returns give zero advantages and no parameter change") {
    GaussianPolicy pol = GaussianPolicy::make(2, 1, {}, 11);
    std::mt19937_64 rng(12);
    std::vector<Trajectory> batch;
    for (int e = 0; e < 3; ++e) batch.push_back(make_trajectory(pol, 1, rng, 2.5));

    ReinforceConfig cfg;
    const auto advantages = compute_advantages(batch, cfg);
    for (const auto& adv : advantages) CHECK(adv.cwiseAbs().maxCoeff() == 0.0);

    const Eigen::VectorXd before = pol.flatten();
    Adam opt(pol.n_params(), cfg.learning_rate);
    reinforce_update(pol, opt, batch, cfg);
    CHECK((pol.flatten().array() == before.array()).all());
}

TEST_CASE("policy gradient matches finite differences of the surrogate") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 4; ++trial) {
        PolicyConfig pcfg;
        pcfg.hidden = {6};
        GaussianPolicy pol = GaussianPolicy::make(3, 2, pcfg, 100 + trial);
        std::vector<Trajectory> batch;
        for (int e = 0; e < 2; ++e) {
            Trajectory traj = make_trajectory(pol, 5, rng, 0.0);
            for (auto& s : traj.steps) {
                std::normal_distribution<double> gauss(0.0, 1.0);
                s.combined = gauss(rng);
            }
            batch.push_back(std::move(traj));
        }
        ReinforceConfig cfg;
        const auto advantages = compute_advantages(batch, cfg);

        const Eigen::VectorXd analytic = policy_gradient(pol, batch, advantages);
        const auto fd = oracle::finite_difference_gradient(
            [&](const Eigen::VectorXd& p) {
                GaussianPolicy probe = pol;
                probe.unflatten(p);
                return surrogate(probe, batch, advantages);
            },
            pol.flatten(), 1e-5);
        CHECK(oracle::max_rel_error(analytic, fd) <= 1e-4);
    }
}

TEST_CASE("a constant shift of all returns leaves the gradient unchanged") {
    std::mt19937_64 rng(14);
    GaussianPolicy pol = GaussianPolicy::make(2, 1, {}, 15);
    std::vector<Trajectory> batch;
    for (int e = 0; e < 3; ++e) batch.push_back(make_trajectory(pol, 4, rng, 0.0));

    ReinforceConfig cfg;
    std::vector<Eigen::VectorXd> returns, shifted;
    for (const auto& traj : batch) {
        Eigen::VectorXd g = discounted_returns(traj, cfg.gamma);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (long t = 0; t < g.size(); ++t) g[t] = gauss(rng);
        returns.push_back(g);
        shifted.push_back(g.array() + 7.3);
    }
    // Baseline subtraction by hand on both versions.
    auto center = [](std::vector<Eigen::VectorXd> gs) {
        double sum = 0.0;
        long n = 0;
        for (const auto& g : gs) {
            sum += g.sum();
            n += g.size();
        }
        for (auto& g : gs) g.array() -= sum / static_cast<double>(n);
        return gs;
    };
    const Eigen::VectorXd g1 = policy_gradient(pol, batch, center(returns));
    const Eigen::VectorXd g2 = policy_gradient(pol, batch, center(shifted));
    CHECK((g1 - g2).norm() <= 1e-10 * std::max(1.0, g1.norm()));
}

TEST_CASE("reinforce updates are deterministic and report diagnostics") {
    auto run_once = [] {
        GaussianPolicy pol = GaussianPolicy::make(2, 1, {}, 21);
        std::mt19937_64 rng(22);
        Adam opt(pol.n_params(), 1e-3);
        ReinforceConfig cfg;
        UpdateDiagnostics diag{};
        for (int round = 0; round < 3; ++round) {
            std::vector<Trajectory> batch;
            for (int e = 0; e < 4; ++e) {
                Trajectory traj = make_trajectory(pol, 6, rng, -1.0);
                traj.steps.back().combined = 5.0 + 2.0 * e;  // spread across episodes
                batch.push_back(std::move(traj));
            }
            diag = reinforce_update(pol, opt, batch, cfg);
        }
        return std::make_pair(pol.flatten(), diag);
    };
    const auto a = run_once();
    const auto b = run_once();
    CHECK((a.first.array() == b.first.array()).all());
    CHECK(a.second.grad_norm == b.second.grad_norm);
    CHECK(a.second.grad_norm > 0.0);
    CHECK(a.second.mean_extrinsic_return == doctest::Approx(-6.0));
}

TEST_CASE("log_std stays inside its clamp range after updates") {
    PolicyConfig pcfg;
    pcfg.log_std_init = 1.9;
    pcfg.log_std_max = 2.0;
    GaussianPolicy pol = GaussianPolicy::make(2, 1, pcfg, 31);
    Eigen::VectorXd params = pol.flatten();
    params.tail(1)[0] = 50.0;  // try to escape the clamp
    pol.unflatten(params);
    CHECK(pol.log_std()[0] == 2.0);
    params.tail(1)[0] = -50.0;
    pol.unflatten(params);
    CHECK(pol.log_std()[0] == -10.0);
}

TEST_CASE("behavior cloning reaches the noise floor on a linear expert") {
    std::mt19937_64 rng(41);
    const int d = 3, k = 2;
    Eigen::MatrixXd a_true(k, d);
    a_true << 0.4, -0.2, 0.1, -0.15, 0.3, 0.25;
    const double noise_std = 0.1;
    std::normal_distribution<double> noise(0.0, noise_std);

    DemoSet train, test;
    const long n_train = 800, n_test = 300;
    train.X.resize(n_train, d);
    train.T.resize(n_train, k);
    test.X.resize(n_test, d);
    test.T.resize(n_test, k);
    for (long i = 0; i < n_train; ++i) {
        train.X.row(i) = random_vec(d, rng).transpose();
        train.T.row(i) = (a_true * train.X.row(i).transpose()).transpose();
        for (int j = 0; j < k; ++j) train.T(i, j) += noise(rng);
    }
    for (long i = 0; i < n_test; ++i) {
        test.X.row(i) = random_vec(d, rng).transpose();
        test.T.row(i) = (a_true * test.X.row(i).transpose()).transpose();
        for (int j = 0; j < k; ++j) test.T(i, j) += noise(rng);
    }

    // Targets reach past 1, so give the tanh-squashed mean enough headroom.
    GaussianPolicy pol = GaussianPolicy::make(d, k, {}, 43, Eigen::VectorXd::Constant(k, 4.0));
    const Eigen::VectorXd log_std_before = pol.log_std();
    BcConfig cfg;
    cfg.epochs = 300;
    cfg.seed = 7;
    pretrain_bc(pol, train, cfg);
    CHECK((pol.log_std().array() == log_std_before.array()).all());  // untouched

    double mse = 0.0;
    for (long i = 0; i < n_test; ++i) {
        const Eigen::VectorXd pred = pol.mean(test.X.row(i).transpose());
        mse += (pred - test.T.row(i).transpose()).squaredNorm();
    }
    mse /= static_cast<double>(n_test * k);
    CHECK(mse <= 1.1 * noise_std * noise_std);
}

TEST_CASE("zero-epoch behavior cloning leaves the policy unchanged") {
    GaussianPolicy pol = GaussianPolicy::make(2, 1, {}, 51);
    const Eigen::VectorXd before = pol.flatten();
    std::mt19937_64 rng(52);
    DemoSet demos;
    demos.X = Eigen::MatrixXd::Random(8, 2);
    demos.T = Eigen::MatrixXd::Random(8, 1);
    BcConfig cfg;
    cfg.epochs = 0;
    pretrain_bc(pol, demos, cfg);
    CHECK((pol.flatten().array() == before.array()).all());
}

TEST_CASE("behavior cloning is deterministic under a fixed seed") {
    std::mt19937_64 rng(55);
    DemoSet demos;
    demos.X = Eigen::MatrixXd::Random(64, 2);
    demos.T = Eigen::MatrixXd::Random(64, 1);
    auto run = [&] {
        GaussianPolicy pol = GaussianPolicy::make(2, 1, {}, 56);
        BcConfig cfg;
        cfg.epochs = 5;
        cfg.seed = 3;
        pretrain_bc(pol, demos, cfg);
        return pol.flatten();
    };
    const Eigen::VectorXd a = run();
    const Eigen::VectorXd b = run();
    CHECK((a.array() == b.array()).all());
}

TEST_CASE("the reinforce algorithm updates only on full batches") {
    ReinforceConfig cfg;
    cfg.batch_episodes = 3;
    GaussianPolicy pol = GaussianPolicy::make(2, 1, {}, 61);
    ReinforceAlgorithm alg(std::move(pol), cfg);
    std::mt19937_64 rng(62);

    const Eigen::VectorXd before = alg.policy().flatten();
    CHECK(!alg.on_episode(make_trajectory(alg.policy(), 3, rng, 1.0)).has_value());
    CHECK(!alg.on_episode(make_trajectory(alg.policy(), 3, rng, -1.0)).has_value());
    CHECK((alg.policy().flatten().array() == before.array()).all());
    const auto diag = alg.on_episode(make_trajectory(alg.policy(), 3, rng, 0.5));
    CHECK(diag.has_value());
    CHECK((alg.policy().flatten().array() != before.array()).any());

    CHECK_THROWS_AS(make_algorithm("trpo", GaussianPolicy::make(2, 1, {}, 1), cfg),
                    std::invalid_argument);
}

TEST_CASE("policy serialization round-trips bitwise") {
    const GaussianPolicy pol = GaussianPolicy::make(3, 2, {}, 71);
    std::stringstream buf;
    pol.save(buf);
    const GaussianPolicy loaded = GaussianPolicy::load(buf);
    CHECK((loaded.flatten().array() == pol.flatten().array()).all());
    std::mt19937_64 rng(72);
    const Eigen::VectorXd obs = random_vec(3, rng);
    const Eigen::VectorXd act = random_vec(2, rng);
    CHECK(loaded.log_prob(obs, act) == pol.log_prob(obs, act));
}
