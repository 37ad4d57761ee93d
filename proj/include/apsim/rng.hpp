#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace apsim {

// splitmix64 finalizer, used to turn structured tags into well-mixed seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Child seed for a named stream. Chaining gives a seed tree: every consumer
// (placement, channels, shadowing, each agent, each repetition) owns its own
// stream, so extending one dimension never perturbs the draws of another.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag + 0x632be59bd9b4e019ull));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

// FNV-1a, folds string identifiers (sweep point ids) into seed material.
constexpr std::uint64_t hash_str(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

// Stream tags for the seed tree.
namespace streams {
inline constexpr std::uint64_t ap_placement = 1;
inline constexpr std::uint64_t sta_placement = 2;
inline constexpr std::uint64_t channels = 3;
inline constexpr std::uint64_t shadowing = 4;
inline constexpr std::uint64_t scenario = 5;
inline constexpr std::uint64_t engine = 6;
inline constexpr std::uint64_t agent = 7;
}  // namespace streams

// Deterministic uniform generator. The raw mt19937_64 sequence is pinned by
// the standard and the distribution code below is our own, so identical seeds
// give bit-identical draws on every platform and compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform over {0, ..., n-1}, bias-free by rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace apsim
