#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace subgae {

// splitmix64 finalizer, used to derive independent stream seeds from a base
// seed plus a stream tag.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic RNG. The engine is std::mt19937_64, but the draw algorithms
// (bit-to-double mapping, bounded ints, Box-Muller normals) are fixed here
// rather than delegated to std::*_distribution, whose exact output is
// implementation-defined; a given seed therefore reproduces the same stream
// on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound); bound > 0. Rejection sampling, no
    // modulo bias.
    std::int64_t uniform_int(std::int64_t bound) {
        const auto b = static_cast<std::uint64_t>(bound);
        const std::uint64_t reject_below = (0 - b) % b;  // 2^64 mod b
        std::uint64_t r = gen_();
        while (r < reject_below) r = gen_();
        return static_cast<std::int64_t>(r % b);
    }

    // Exponential(1) via inverse CDF; argument of log stays in (0, 1].
    double exponential() { return -std::log1p(-uniform()); }

    // Standard normal, Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(2.0 * exponential());
        const double t = 6.283185307179586476925286766559 * uniform();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    // Independent child stream; derived from the original seed and the tag,
    // so forks do not depend on how far this stream has advanced.
    Rng fork(std::uint64_t tag) const {
        return Rng(mix_seed(seed_ ^ mix_seed(tag)));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace subgae
