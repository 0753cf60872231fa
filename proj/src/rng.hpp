#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace stirlab {

using Rng = std::mt19937_64;

// splitmix64 finalizer. Part of the reproducibility contract: changing it
// changes every published trial stream.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Folds a list of tags into a master seed to obtain an independent stream seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = mix64(master);
    for (auto t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
    return h;
}

// Beta(a, b) via two gamma draws; std has no beta distribution.
inline double sample_beta(Rng& rng, double a, double b) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    const double s = x + y;
    return s > 0.0 ? x / s : 0.5;
}

}  // namespace stirlab
