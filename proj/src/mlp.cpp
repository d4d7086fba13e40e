// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#include "curio/mlp.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "curio/common.hpp"

namespace curio {

void Mlp::Grads::setZero() {
    for (auto& m : w) m.setZero();
    for (auto& v : b) v.setZero();
}

Eigen::VectorXd Mlp::Grads::flatten() const {
    Eigen::Index n = 0;
    for (const auto& m : w) n += m.size();
    for (const auto& v : b) n += v.size();
    Eigen::VectorXd out(n);
    Eigen::Index at = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        out.segment(at, w[k].size()) = Eigen::Map<const Eigen::VectorXd>(w[k].data(), w[k].size());
        at += w[k].size();
        out.segment(at, b[k].size()) = b[k];
        at += b[k].size();
    }
    return out;
}

Mlp Mlp::make(int input_dim, const std::vector<int>& hidden, int output_dim,
              Activation output_act, std::mt19937_64& rng, double weight_scale) {
    if (input_dim < 1 || output_dim < 1) {
        throw std::invalid_argument("Mlp::make: dimensions must be >= 1");
    }
    if (!(weight_scale > 0.0)) {
        throw std::invalid_argument("Mlp::make: weight_scale must be > 0");
    }
    Mlp net;
    net.output_act_ = output_act;
    int in = input_dim;
    std::vector<int> sizes = hidden;
    sizes.push_back(output_dim);
    for (int out : sizes) {
        if (out < 1) throw std::invalid_argument("Mlp::make: layer width must be >= 1");
        const double limit = weight_scale * std::sqrt(6.0 / static_cast<double>(in + out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Eigen::MatrixXd w(out, in);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = dist(rng);
            }
        }
        net.w_.push_back(std::move(w));
        net.b_.push_back(Eigen::VectorXd::Zero(out));
        in = out;
    }
    return net;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd row = x.transpose();
    return forward(row).row(0).transpose();
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    Tape tape;
    return forward(x, tape);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Tape& tape) const {
    if (x.cols() != input_dim()) {
        throw std::invalid_argument("Mlp::forward: input has " + std::to_string(x.cols()) +
                                    " columns, expected " + std::to_string(input_dim()));
    }
    tape.acts.clear();
    tape.acts.reserve(w_.size() + 1);
    tape.acts.push_back(x);
    Eigen::MatrixXd cur = x;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        Eigen::MatrixXd pre = cur * w_[k].transpose();
        pre.rowwise() += b_[k].transpose();
        const bool last = (k + 1 == w_.size());
        if (!last || output_act_ == Activation::Tanh) {
            cur = pre.array().tanh();
        } else {
            cur = std::move(pre);
        }
        tape.acts.push_back(cur);
    }
    return cur;
}

Eigen::MatrixXd Mlp::backward(const Tape& tape, const Eigen::MatrixXd& dout,
                              Grads& grads) const {
    if (tape.acts.size() != w_.size() + 1) {
        throw std::invalid_argument("Mlp::backward: tape does not match network");
    }
    Eigen::MatrixXd delta = dout;
    for (int k = n_layers() - 1; k >= 0; --k) {
        const bool last = (k + 1 == n_layers());
        if (!last || output_act_ == Activation::Tanh) {
            // d tanh(z) = 1 - tanh(z)^2, with tanh(z) already on the tape.
            delta.array() *= (1.0 - tape.acts[k + 1].array().square());
        }
        grads.w[k].noalias() += delta.transpose() * tape.acts[k];
        grads.b[k] += delta.colwise().sum().transpose();
        delta = delta * w_[k];
    }
    return delta;  // d(loss)/d(input)
}

Mlp::Grads Mlp::zero_grads() const {
    Grads g;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        g.w.push_back(Eigen::MatrixXd::Zero(w_[k].rows(), w_[k].cols()));
        g.b.push_back(Eigen::VectorXd::Zero(b_[k].size()));
    }
    return g;
}

int Mlp::n_params() const {
    Eigen::Index n = 0;
    for (const auto& m : w_) n += m.size();
    for (const auto& v : b_) n += v.size();
    return static_cast<int>(n);
}

Eigen::VectorXd Mlp::flatten() const {
    Eigen::VectorXd out(n_params());
    Eigen::Index at = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        out.segment(at, w_[k].size()) = Eigen::Map<const Eigen::VectorXd>(w_[k].data(), w_[k].size());
        at += w_[k].size();
        out.segment(at, b_[k].size()) = b_[k];
        at += b_[k].size();
    }
    return out;
}

void Mlp::unflatten(const Eigen::VectorXd& params) {
    if (params.size() != n_params()) {
        throw std::invalid_argument("Mlp::unflatten: wrong parameter count");
    }
    Eigen::Index at = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        Eigen::Map<Eigen::VectorXd>(w_[k].data(), w_[k].size()) = params.segment(at, w_[k].size());
        at += w_[k].size();
        b_[k] = params.segment(at, b_[k].size());
        at += b_[k].size();
    }
}

bool Mlp::finite() const {
    for (const auto& m : w_) {
        if (!m.allFinite()) return false;
    }
    for (const auto& v : b_) {
        if (!v.allFinite()) return false;
    }
    return true;
}

void Mlp::save(std::ostream& out) const {
    out << n_layers() << ' ' << (output_act_ == Activation::Tanh ? "tanh" : "linear") << '\n';
    for (int k = 0; k < n_layers(); ++k) {
        out << w_[k].rows() << ' ' << w_[k].cols() << '\n';
        for (Eigen::Index r = 0; r < w_[k].rows(); ++r) {
            for (Eigen::Index c = 0; c < w_[k].cols(); ++c) {
                out << fmt_double(w_[k](r, c)) << (c + 1 < w_[k].cols() ? ' ' : '\n');
            }
        }
        for (Eigen::Index r = 0; r < b_[k].size(); ++r) {
            out << fmt_double(b_[k][r]) << (r + 1 < b_[k].size() ? ' ' : '\n');
        }
    }
}

Mlp Mlp::load(std::istream& in) {
    int layers = 0;
    std::string act;
    if (!(in >> layers >> act) || layers < 1) {
        throw std::invalid_argument("Mlp::load: bad layer count");
    }
    Mlp net;
    if (act == "tanh") {
        net.output_act_ = Activation::Tanh;
    } else if (act == "linear") {
        net.output_act_ = Activation::Linear;
    } else {
        throw std::invalid_argument("Mlp::load: unknown activation tag '" + act + "'");
    }
    std::string tok;
    for (int k = 0; k < layers; ++k) {
        Eigen::Index rows = 0, cols = 0;
        if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
            throw std::invalid_argument("Mlp::load: bad layer shape");
        }
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                if (!(in >> tok)) throw std::invalid_argument("Mlp::load: truncated weights");
                w(r, c) = parse_double(tok);
            }
        }
        Eigen::VectorXd b(rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (!(in >> tok)) throw std::invalid_argument("Mlp::load: truncated biases");
            b[r] = parse_double(tok);
        }
        net.w_.push_back(std::move(w));
        net.b_.push_back(std::move(b));
    }
    return net;
}

Adam::Adam(int n_params, double learning_rate, double l2_weight)
    : lr_(learning_rate), l2_(l2_weight), m_(Eigen::VectorXd::Zero(n_params)),
      v_(Eigen::VectorXd::Zero(n_params)) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
        throw std::invalid_argument("Adam::step: size mismatch");
    }
    Eigen::VectorXd g = grad;
    if (l2_ != 0.0) g += l2_ * params;
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * g;
    v_ = beta2_ * v_ + (1.0 - beta2_) * g.cwiseProduct(g);
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    const Eigen::ArrayXd denom = (v_.array() / bc2).sqrt() + eps_;
    params.array() -= (lr_ / bc1) * m_.array() / denom;
}

}  // namespace curio
