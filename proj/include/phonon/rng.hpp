#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace phonon {

// splitmix64 finalizer; used to spread user seeds and to derive
// independent per-batch streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for substream `index` of a run seeded with `seed`. Every batch of a
// simulation owns one such stream; merging batch results is then independent
// of execution order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index + 1));
}

// Seedable RNG with the small set of samplers the simulation needs.
// All samplers are written out explicitly on top of raw 64-bit draws so that
// results are reproducible bit-for-bit across platforms and library versions
// (std::*_distribution makes no such guarantee).
class StreamRng {
  public:
    explicit StreamRng(std::uint64_t seed) : engine_(seed) {}

    // uniform in [2^-53, 1]; never returns 0 so log() is always finite
    double uniform() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    bool bernoulli(double prob) {
        if (prob <= 0.0) return false;
        if (prob >= 1.0) return true;
        return uniform() <= prob;
    }

    // geometric on {0,1,2,...} with P(n) = (1-q) q^n, 0 <= q < 1
    std::uint32_t geometric(double q) {
        if (q <= 0.0) return 0;
        double u = uniform();
        if (u > q) return 0;  // fast path: P(n=0) = 1-q
        return static_cast<std::uint32_t>(std::log(u) / std::log(q));
    }

    // binomial by explicit trials; n is small throughout this codebase
    std::uint32_t binomial(std::uint32_t n, double prob) {
        if (prob <= 0.0) return 0;
        if (prob >= 1.0) return n;
        std::uint32_t k = 0;
        for (std::uint32_t i = 0; i < n; ++i) k += bernoulli(prob);
        return k;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace phonon
