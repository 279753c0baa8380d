#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace heavytail {

// SplitMix64 step; used to whiten seeds and derive independent streams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random stream. All variate transforms are written out
// explicitly so that a fixed seed yields the same draw sequence on every
// platform, independent of the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        engine_.seed(splitmix64_next(s));
    }

    // Stream `stream` of a master seed. Streams with distinct ids are
    // independent for all practical purposes; this is the only sanctioned way
    // to fan a seed out across workers or experiments.
    static Rng derive(std::uint64_t master_seed, std::uint64_t stream) {
        std::uint64_t s = master_seed;
        std::uint64_t a = splitmix64_next(s);
        s = stream ^ 0x6a09e667f3bcc909ULL;
        std::uint64_t b = splitmix64_next(s);
        return Rng(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1]; never returns 0, safe to feed into logs and inverses.
    double uniform_pos() { return 1.0 - uniform(); }

    // Exp(1) by inverse transform.
    double exponential() { return -std::log(uniform_pos()); }

    // Standard normal, Box-Muller with a cached spare.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        double theta = 6.283185307179586476925287 * uniform();
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Poisson(mean) as the number of unit-exponential arrivals in [0, mean].
    // O(mean), which is fine here: every caller also generates O(mean) jumps.
    std::int64_t poisson(double mean) {
        std::int64_t n = 0;
        double acc = exponential();
        while (acc <= mean) {
            ++n;
            acc += exponential();
        }
        return n;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace heavytail
