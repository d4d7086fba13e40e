// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/demos.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "curio/common.hpp"
#include "curio/env.hpp"
#include "curio/experts.hpp"

namespace curio {

void DemoSet::validate() const {
    if (X.rows() != T.rows()) {
        throw std::invalid_argument("DemoSet: observation and target row counts differ");
    }
    if (rows() < 2) {
        throw std::invalid_argument("DemoSet: need at least 2 rows");
    }
}

DemoSet DemoSet::take(const std::vector<long>& row_indices) const {
    DemoSet out;
    out.X.resize(static_cast<long>(row_indices.size()), X.cols());
    out.T.resize(static_cast<long>(row_indices.size()), T.cols());
    for (std::size_t i = 0; i < row_indices.size(); ++i) {
        out.X.row(static_cast<long>(i)) = X.row(row_indices[i]);
        out.T.row(static_cast<long>(i)) = T.row(row_indices[i]);
    }
    return out;
}

void save_demos_csv(const DemoSet& demos, std::ostream& out) {
    for (int j = 0; j < demos.obs_dim(); ++j) out << "obs_" << j << ',';
    for (int j = 0; j < demos.action_dim(); ++j) {
        out << "act_" << j << (j + 1 < demos.action_dim() ? "," : "\n");
    }
    for (long i = 0; i < demos.rows(); ++i) {
        for (int j = 0; j < demos.obs_dim(); ++j) out << fmt_double(demos.X(i, j)) << ',';
        for (int j = 0; j < demos.action_dim(); ++j) {
            out << fmt_double(demos.T(i, j)) << (j + 1 < demos.action_dim() ? "," : "\n");
        }
    }
}

void save_demos_csv(const DemoSet& demos, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_demos_csv: cannot open " + path);
    save_demos_csv(demos, out);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

DemoSet load_demos_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("load_demos_csv: empty file");
    const auto header = split_csv_line(line);
    int obs_dim = 0, act_dim = 0;
    for (const auto& name : header) {
        if (name.rfind("obs_", 0) == 0) {
            ++obs_dim;
        } else if (name.rfind("act_", 0) == 0) {
            ++act_dim;
        } else {
            throw std::invalid_argument("load_demos_csv: unexpected column '" + name + "'");
        }
    }
    if (obs_dim < 1 || act_dim < 1) {
        throw std::invalid_argument("load_demos_csv: header must list obs_* and act_* columns");
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != obs_dim + act_dim) {
            throw std::invalid_argument("load_demos_csv: row with wrong field count");
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f));
        rows.push_back(std::move(row));
    }
    DemoSet demos;
    demos.X.resize(static_cast<long>(rows.size()), obs_dim);
    demos.T.resize(static_cast<long>(rows.size()), act_dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < obs_dim; ++j) demos.X(static_cast<long>(i), j) = rows[i][j];
        for (int j = 0; j < act_dim; ++j) demos.T(static_cast<long>(i), j) = rows[i][obs_dim + j];
    }
    return demos;
}

DemoSet load_demos_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_demos_csv: cannot open " + path);
    return load_demos_csv(in);
}

DemoSet generate_demos(const std::string& env_id, long n, double noise_std, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_demos: n must be >= 1");
    if (noise_std < 0.0) throw std::invalid_argument("generate_demos: noise_std must be >= 0");
    if (!has_expert(env_id)) {
        throw std::invalid_argument("generate_demos: no scripted expert for '" + env_id + "'");
    }
    auto env = make_env(env_id);
    const EnvSpec& spec = env->spec();

    DemoSet demos;
    demos.X.resize(n, spec.obs_dim);
    demos.T.resize(n, spec.action_dim);

    std::mt19937_64 rng(mix_seed(seed, 0x6f15e));
    std::normal_distribution<double> gauss(0.0, 1.0);

    long row = 0;
    std::uint64_t episode = 0;
    while (row < n) {
        Eigen::VectorXd obs = env->reset(mix_seed(seed, episode++));
        while (row < n) {
            Eigen::VectorXd target = expert_action(env_id, env->state())
                                         .cwiseMax(spec.action_low)
                                         .cwiseMin(spec.action_high);
            demos.X.row(row) = obs;
            demos.T.row(row) = target;
            ++row;

            Eigen::VectorXd executed = target;
            if (noise_std > 0.0) {
                for (int j = 0; j < spec.action_dim; ++j) executed[j] += noise_std * gauss(rng);
            }
            const StepResult r = env->step(executed);
            obs = r.observation;
            if (r.terminal || r.truncated) break;
        }
    }
    return demos;
}

}  // namespace curio
