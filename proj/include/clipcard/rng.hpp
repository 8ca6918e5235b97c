#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace clipcard {

/// Seeded random source. All randomness in the simulator flows through this
/// class; the uniform/normal mappings are written out here instead of using
/// std::*_distribution so that a given seed produces the same stream on every
/// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0,1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Inclusive on both ends.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// Zero-mean gaussian, Box-Muller.
    double normal(double stddev) {
        const double u1 = 1.0 - uniform01(); // (0,1]
        const double u2 = uniform01();
        return stddev * std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace clipcard
