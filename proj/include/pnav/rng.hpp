#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pnav {

// All randomness flows through this header so that runs are reproducible
// bit-for-bit across platforms: mt19937_64 output is fixed by the standard,
// and we roll our own uniform/normal transforms instead of the
// implementation-defined std distributions.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stable derivation of a child seed (per trial, per stream, ...).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) {
    return splitmix64(parent ^ splitmix64(key + 0x9E3779B97F4A7C15ULL));
}

/// Stream ids used to split one trial seed into independent streams.
enum class StreamId : std::uint64_t {
    Gps = 1,
    Compass = 2,
    Patience = 3,
    Multipath = 4,
    NetInit = 5,
    Action = 6,
    Replay = 7,
    Env = 8,
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    int uniform_int(int n) {
        int k = static_cast<int>(uniform() * n);
        return k >= n ? n - 1 : k;
    }

    /// Standard normal via Box-Muller (pair cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double sigma) { return sigma == 0.0 ? 0.0 : sigma * normal(); }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) {
        return -std::log(1.0 - uniform()) / rate;
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

inline Rng make_stream(std::uint64_t trial_seed, StreamId id) {
    return Rng(derive_seed(trial_seed, static_cast<std::uint64_t>(id)));
}

} // namespace pnav
