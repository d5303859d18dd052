#pragma once

#include <cmath>
#include <cstdint>

namespace afcfit {

// Counter-based generator built on the splitmix64 finalizer. A (seed, stream)
// pair names an independent sequence, so per-record streams drawn in parallel
// or serially produce identical results.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(mix(seed ^ 0x6A09E667F3BCC909ULL) ^ mix(stream + 0xBB67AE8584CAA73BULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound); bound > 0. Fixed-point multiply, no rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // Draw from B(m, p) as m Bernoulli trials; consumes exactly m uniforms.
    int binomial(int m, double p) {
        int n = 0;
        for (int i = 0; i < m; ++i) {
            if (next_unit() < p) ++n;
        }
        return n;
    }

    // Standard normal pair via Box-Muller; consumes exactly two uniforms.
    void normal_pair(double& z0, double& z1) {
        const double u1 = 1.0 - next_unit();  // (0, 1]
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        z0 = r * std::cos(theta);
        z1 = r * std::sin(theta);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace afcfit
