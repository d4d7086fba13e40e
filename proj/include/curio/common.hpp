// Copyright 2026 The Curio Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curio {

/// Raised when a linear-algebra step cannot be completed (e.g. a Cholesky
/// factorization that stays indefinite after the jitter retry).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an operation is not defined for the given target (e.g. a
/// curiosity surface over an environment whose state is not 2-D).
class unsupported_operation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Shortest round-trip decimal rendering of a double. Used everywhere a
/// number is written to disk so that reload and re-run are bit-exact.
inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc()) {
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    }
    return v;
}

/// splitmix64 step; used to derive independent RNG streams from one seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace curio
