#pragma once

#include <cmath>
#include <cstdint>

#include "stlplan/mathutil.hpp"

namespace stlplan {

// splitmix64 finalizer. Used for deriving child seeds so that per-scenario
// streams are independent of iteration order.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30u)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27u)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31u);
}

// Deterministic generator (xoshiro-free: plain splitmix64 stream). The
// standard <random> distributions are implementation-defined, so all
// sampling goes through the helpers below to keep outputs reproducible
// byte-for-byte across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        return splitmix();
    }

    // in [0, 1)
    double uniform01() {
        return static_cast<double>(splitmix() >> 11u) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // in [lo, hi] inclusive
    int uniform_int(int lo, int hi) {
        if (hi <= lo) {
            return lo;
        }
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
        return lo + static_cast<int>(splitmix() % span);
    }

    std::uint64_t uniform_u64(std::uint64_t n) {
        return n == 0 ? 0 : splitmix() % n;
    }

    bool bernoulli(double p) {
        return uniform01() < p;
    }

    // Box-Muller; one value per call, spare discarded for simplicity.
    double gaussian(double mean, double stddev) {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 1e-300) {
            u1 = uniform01();
        }
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * kPi * u2);
    }

private:
    std::uint64_t splitmix() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30u)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27u)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31u);
    }

    std::uint64_t state_;
};

}  // namespace stlplan
