#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "dfrc/types.hpp"

namespace dfrc {

/// SplitMix64 step; used to whiten trial indices into sub-seeds.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sub-seed for one Monte Carlo trial. Trials own independent streams so
/// results do not depend on how trials are scheduled across threads.
inline uint64_t trial_seed(uint64_t campaign_seed, uint64_t trial_index) {
    return campaign_seed ^ splitmix64(trial_index);
}

/**
 * Seeded random stream for one trial. All draws are explicit methods so the
 * draw order inside a trial is fixed by the call sites, not by library
 * distribution internals.
 */
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer uniform in [lo, hi] via rejection-free 128-bit scaling.
    int uniform_int(int lo, int hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        const auto wide = static_cast<unsigned __int128>(eng_()) * span;
        return lo + static_cast<int>(wide >> 64);
    }

    /// Circularly-symmetric complex Gaussian, E|z|^2 = 1.
    cplx cgauss() {
        const double u = 1.0 - uniform();  // (0, 1]
        const double v = uniform();
        const double r = std::sqrt(-std::log(u));
        const double ph = 2.0 * std::numbers::pi * v;
        return {r * std::cos(ph), r * std::sin(ph)};
    }

    /// Real standard normal.
    double gaussian() {
        const double u = 1.0 - uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

    std::vector<uint8_t> bits(int count) {
        std::vector<uint8_t> out(static_cast<size_t>(count));
        for (auto& b : out) b = static_cast<uint8_t>(eng_() >> 63);
        return out;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace dfrc
