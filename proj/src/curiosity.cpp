// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/curiosity.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "curio/common.hpp"

namespace curio {

CuriosityState::CuriosityState(std::shared_ptr<const FeatureMap> fm, BlrPosterior post, double eta)
    : fm_(std::move(fm)), post_(std::move(post)), eta_(eta) {
    if (!fm_) throw std::invalid_argument("CuriosityState: null feature map");
    if (eta_ < 0.0) throw std::invalid_argument("CuriosityState: eta must be >= 0");
    if (post_.dim() != fm_->output_dim()) {
        throw std::invalid_argument("CuriosityState: posterior dimension does not match embedding");
    }
}

CuriosityState CuriosityState::fresh(std::shared_ptr<const FeatureMap> fm, double alpha,
                                     double beta, double eta) {
    if (!fm) throw std::invalid_argument("CuriosityState: null feature map");
    return CuriosityState(fm, make_prior(alpha, beta, fm->output_dim()), eta);
}

double CuriosityState::curiosity_reward(const Eigen::VectorXd& obs) const {
    // embed() rejects non-finite observations.
    const Eigen::VectorXd phi = fm_->embed(obs);
    return std::log(post_.predict(phi).variance);
}

double CuriosityState::combined_reward(double extrinsic, const Eigen::VectorXd& obs) const {
    return extrinsic + eta_ * curiosity_reward(obs);
}

CuriosityState CuriosityState::absorb_episode(
    const std::vector<Eigen::VectorXd>& observations) const {
    if (observations.empty()) {
        throw std::invalid_argument("absorb_episode: empty observation sequence");
    }
    Eigen::MatrixXd phi(static_cast<long>(observations.size()), fm_->output_dim());
    for (std::size_t i = 0; i < observations.size(); ++i) {
        phi.row(static_cast<long>(i)) = fm_->embed(observations[i]);
    }
    return CuriosityState(fm_, post_.update_variance_only(phi), eta_);
}

void CuriosityState::save(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    fm_->save((fs::path(dir) / "feature_map.txt").string());
    {
        std::ofstream out(fs::path(dir) / "posterior.txt");
        if (!out) throw std::invalid_argument("CuriosityState::save: cannot write posterior");
        post_.save(out);
    }
    nlohmann::json manifest;
    manifest["format"] = "curio-curiosity v1";
    manifest["eta"] = eta_;
    manifest["beta"] = post_.beta();
    manifest["files"] = {"feature_map.txt", "posterior.txt"};
    std::ofstream out(fs::path(dir) / "manifest.json");
    out << manifest.dump(2) << '\n';
}

CuriosityState CuriosityState::load(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream mf(fs::path(dir) / "manifest.json");
    if (!mf) throw std::invalid_argument("CuriosityState::load: no manifest in " + dir);
    nlohmann::json manifest = nlohmann::json::parse(mf);
    if (manifest.value("format", "") != "curio-curiosity v1") {
        throw std::invalid_argument("CuriosityState::load: unknown checkpoint format");
    }
    auto fm = std::make_shared<FeatureMap>(
        FeatureMap::load((fs::path(dir) / "feature_map.txt").string()));
    std::ifstream pf(fs::path(dir) / "posterior.txt");
    if (!pf) throw std::invalid_argument("CuriosityState::load: missing posterior record");
    BlrPosterior post = BlrPosterior::load(pf);
    return CuriosityState(std::move(fm), std::move(post), manifest.at("eta").get<double>());
}

}  // namespace curio
