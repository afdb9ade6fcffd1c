#ifndef UCG_RANDOM_HPP
#define UCG_RANDOM_HPP

#include <cstdint>
#include <random>

namespace ucg {

/// One step of the splitmix64 generator, used to derive independent seeds:
/// the stream for item i of a run seeded with s is seeded with splitmix64(s + i).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool bernoulli(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace ucg

#endif  // UCG_RANDOM_HPP
