#pragma once
#include <cstdint>
#include <random>

namespace qadapt {

using Rng = std::mt19937_64;

// splitmix64 finalizer; spreads correlated integer keys into independent seeds
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ull));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b), c);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return mix64(mix64(a, b, c), d);
}

// Stream tags keep the per-purpose substreams of one run seed disjoint.
namespace stream {
inline constexpr std::uint64_t kInit = 0x101;
inline constexpr std::uint64_t kTrain = 0x202;
inline constexpr std::uint64_t kEval = 0x303;
}  // namespace stream

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

// Substream for (seed, tag, index...); identical keys give identical streams.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t i = 0,
                      std::uint64_t j = 0) {
    return Rng(mix64(mix64(seed, tag), i, j));
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool bernoulli(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace qadapt
