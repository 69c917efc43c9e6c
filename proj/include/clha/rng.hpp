// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace clha {

// std::mt19937_64 is fully specified by the standard; the helpers below avoid
// std::uniform_*_distribution and std::shuffle, whose outputs are
// implementation-defined, so every artifact is byte-stable across toolchains.
using Rng = std::mt19937_64;

// 53-bit uniform draw in [0, 1).
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

// Uniform in [0, n); n must be > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    return rng() % n;
}

// Uniform in [lo, hi); hi must exceed lo.
inline int uniform_int(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo)));
}

// Fisher-Yates, driven by the deterministic draws above.
template <class T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// splitmix64 finalizer; used to derive independent per-epoch / per-prompt seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace clha
