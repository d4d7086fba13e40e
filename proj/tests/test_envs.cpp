// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "curio/envs.hpp"
#include "curio/experts.hpp"

using namespace curio;

namespace {

Eigen::VectorXd act1(double a) {
    Eigen::VectorXd v(1);
    v[0] = a;
    return v;
}

Eigen::VectorXd random_action(const EnvSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);  // deliberately exceeds bounds
    Eigen::VectorXd a(spec.action_dim);
    for (int j = 0; j < spec.action_dim; ++j) a[j] = u(rng);
    return a;
}

// Hill profile y = sin(3x)/3 gives the gravity term -0.0025*cos(3x).
double mountaincar_energy(double x, double v) {
    return 0.5 * v * v + MountainCarEnv::kGravityScale * std::sin(3.0 * x) / 3.0;
}

}  // namespace

TEST_CASE("registry lists the four environments and rejects unknown ids") {
    const auto ids = env_ids();
    REQUIRE(ids.size() == 4);
    for (const auto& id : ids) {
        auto env = make_env(id);
        CHECK(env->spec().id == id);
        CHECK(env->spec().action_dim == 1);
    }
    CHECK_THROWS_AS(make_env("lunarlander"), std::invalid_argument);
}

TEST_CASE("specs carry the documented horizons and action bounds") {
    CHECK(make_env("mountaincar")->spec().horizon == 200);
    CHECK(make_env("cartpole_swingup")->spec().horizon == 500);
    CHECK(make_env("pendulum")->spec().horizon == 100);
    CHECK(make_env("acrobot")->spec().horizon == 500);
    CHECK(make_env("pendulum")->spec().action_high[0] == 2.0);
    CHECK(make_env("mountaincar")->spec().action_high[0] == 1.0);
}

TEST_CASE("trajectories are bitwise deterministic given seed and actions") {
    for (const auto& id : env_ids()) {
        auto a = make_env(id);
        auto b = make_env(id);
        std::mt19937_64 rng_a(77), rng_b(77);
        Eigen::VectorXd obs_a = a->reset(5);
        Eigen::VectorXd obs_b = b->reset(5);
        CHECK((obs_a.array() == obs_b.array()).all());
        for (int t = 0; t < 50; ++t) {
            const StepResult ra = a->step(random_action(a->spec(), rng_a));
            const StepResult rb = b->step(random_action(b->spec(), rng_b));
            CHECK((ra.observation.array() == rb.observation.array()).all());
            CHECK(ra.extrinsic_reward == rb.extrinsic_reward);
            CHECK(ra.terminal == rb.terminal);
            if (ra.terminal || ra.truncated) break;
        }
    }
}

TEST_CASE("horizon truncation is exact and stepping past the end throws") {
    auto env = make_env("pendulum");
    env->reset(1);
    for (int t = 1; t <= 100; ++t) {
        const StepResult r = env->step(act1(0.0));
        CHECK(r.truncated == (t == 100));
        CHECK(r.terminal == false);
    }
    CHECK_THROWS_AS(env->step(act1(0.0)), std::logic_error);
}

TEST_CASE("per-step rewards stay in the documented sets") {
    std::mt19937_64 rng(9);
    for (const auto& id : env_ids()) {
        auto env = make_env(id);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            env->reset(seed);
            while (true) {
                const StepResult r = env->step(random_action(env->spec(), rng));
                const double e = r.extrinsic_reward;
                if (id == "mountaincar") {
                    CHECK((e == -1.0 || e == 100.0));
                } else if (id == "cartpole_swingup") {
                    CHECK((e == -1.0 || e == -200.0 || (e >= 0.5 && e <= 1.0)));
                } else if (id == "pendulum") {
                    CHECK((e == -1.0 || (e >= 0.9 && e <= 1.0)));
                } else {
                    CHECK(e == -1.0);
                }
                if (r.terminal || r.truncated) break;
            }
        }
    }
}

TEST_CASE("mountaincar reset draws x in [-0.6, -0.4] with zero velocity") {
    auto env = make_env("mountaincar");
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Eigen::VectorXd obs = env->reset(seed);
        CHECK(obs[0] >= -0.6);
        CHECK(obs[0] <= -0.4);
        CHECK(obs[1] == 0.0);
    }
    const Eigen::VectorXd a = env->reset(3);
    const Eigen::VectorXd b = env->reset(3);
    CHECK((a.array() == b.array()).all());
}

TEST_CASE("mountaincar pays 100 and terminates at the goal") {
    auto env = make_env("mountaincar");
    env->reset(0);
    Eigen::VectorXd s(2);
    s << 0.46, 0.0;  // past the goal line; the next step stays past it
    env->set_state(s);
    const StepResult r = env->step(act1(1.0));
    CHECK(r.extrinsic_reward == 100.0);
    CHECK(r.terminal);
    CHECK(env->success_step(r));
    CHECK_THROWS_AS(env->step(act1(0.0)), std::logic_error);
}

TEST_CASE("mountaincar mechanical energy is non-increasing with zero action") {
    // The physical energy change per semi-implicit step is -dv^2/2 plus a
    // symplectic wobble bounded by (3/2)*0.0025*v'^2 from the hill curvature;
    // non-increase must hold up to that integrator term, and the cumulative
    // energy must never climb meaningfully above the start.
    auto env = make_env("mountaincar");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        env->reset(seed);
        const double start = mountaincar_energy(env->state()[0], env->state()[1]);
        double prev = start;
        for (int t = 0; t < 200; ++t) {
            const StepResult r = env->step(act1(0.0));
            const double v = env->state()[1];
            const double cur = mountaincar_energy(env->state()[0], v);
            CHECK(cur <= prev + 0.00375 * v * v + 1e-15);
            CHECK(cur <= start + 1e-5);
            prev = cur;
            if (r.terminal || r.truncated) break;
        }
    }
}

TEST_CASE("pendulum reset bounds and near-upright reward equals cos(theta)") {
    auto env = make_env("pendulum");
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        env->reset(seed);
        CHECK(std::abs(env->state()[0]) <= std::numbers::pi);
        CHECK(std::abs(env->state()[1]) <= 1.0);
    }

    env->reset(0);
    Eigen::VectorXd s(2);
    s << 0.15, 0.0;  // cos = 0.9888
    env->set_state(s);
    const StepResult r = env->step(act1(0.0));
    const double c = std::cos(env->state()[0]);
    CHECK(c >= 0.9);
    CHECK(r.extrinsic_reward == c);
    CHECK(env->success_step(r));
}

TEST_CASE("pendulum energy is conserved under zero torque") {
    auto env = make_env("pendulum");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        env->reset(seed);
        double prev = PendulumEnv::energy(env->state()[0], env->state()[1]);
        for (int t = 0; t < 100; ++t) {
            env->step(act1(0.0));
            const double cur = PendulumEnv::energy(env->state()[0], env->state()[1]);
            CHECK(std::abs(cur - prev) <= 1e-3);
            prev = cur;
        }
    }
}

TEST_CASE("cartpole swingup starts hanging down and pays cos(theta) upright") {
    auto env = make_env("cartpole_swingup");
    const Eigen::VectorXd obs = env->reset(4);
    CHECK(obs.size() == 5);
    CHECK(obs[2] < -0.99);  // cos(theta) near -1: hanging

    Eigen::VectorXd s(4);
    s << 0.0, 0.0, 0.05, 0.0;
    env->set_state(s);
    const StepResult r = env->step(act1(0.0));
    const double c = std::cos(env->state()[2]);
    CHECK(c >= 0.5);
    CHECK(r.extrinsic_reward == c);
    CHECK(env->success_step(r));
}

TEST_CASE("cartpole swingup fails with -200 at the rail bound") {
    auto env = make_env("cartpole_swingup");
    env->reset(0);
    Eigen::VectorXd s(4);
    s << 2.39, 3.0, std::numbers::pi, 0.0;
    env->set_state(s);
    const StepResult r = env->step(act1(1.0));
    CHECK(r.extrinsic_reward == -200.0);
    CHECK(r.terminal);
    CHECK(!env->success_step(r));
}

TEST_CASE("acrobot terminates at tip height 1.9") {
    auto env = make_env("acrobot");
    env->reset(0);
    CHECK(AcrobotEnv::tip_height(0.0, 0.0) == doctest::Approx(-2.0));
    CHECK(AcrobotEnv::tip_height(std::numbers::pi, 0.0) == doctest::Approx(2.0));

    Eigen::VectorXd s(4);
    s << std::numbers::pi - 0.05, 0.0, 0.0, 0.0;  // tip height 1.996, nearly at rest
    env->set_state(s);
    const StepResult r = env->step(act1(0.0));
    CHECK(r.terminal);
    CHECK(r.extrinsic_reward == -1.0);
    CHECK(env->success_step(r));

    // Hanging straight down is far from the goal.
    auto fresh = make_env("acrobot");
    fresh->reset(1);
    const StepResult r2 = fresh->step(act1(0.0));
    CHECK(!r2.terminal);
}

TEST_CASE("actions are clipped to the documented bounds") {
    // An absurdly large action must behave exactly like the bound.
    for (const auto& id : env_ids()) {
        auto a = make_env(id);
        auto b = make_env(id);
        a->reset(11);
        b->reset(11);
        const double hi = a->spec().action_high[0];
        for (int t = 0; t < 20; ++t) {
            const StepResult ra = a->step(act1(1e9));
            const StepResult rb = b->step(act1(hi));
            CHECK((ra.observation.array() == rb.observation.array()).all());
            if (ra.terminal || ra.truncated) break;
        }
    }
}

TEST_CASE("scripted experts solve their tasks from scripted rollouts") {
    // mountaincar and pendulum reach the goal quickly; cartpole stays on the
    // rail and balances; acrobot reaches the 1.9 height line.
    int mc = 0, pend = 0, cart = 0, acro = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        for (const auto& id : env_ids()) {
            auto env = make_env(id);
            env->reset(seed);
            bool ok = false;
            while (true) {
                const StepResult r = env->step(expert_action(id, env->state()));
                ok = ok || env->success_step(r);
                if (r.terminal || r.truncated) break;
            }
            if (id == "mountaincar") mc += ok;
            if (id == "pendulum") pend += ok;
            if (id == "cartpole_swingup") cart += ok;
            if (id == "acrobot") acro += ok;
        }
    }
    CHECK(mc == 5);
    CHECK(pend == 5);
    CHECK(cart == 5);
    CHECK(acro == 5);
}
