#pragma once

#include <cstdint>

namespace pluripot {

// Counter-based generator: every draw is a pure function of
// (seed, sample index, dimension), so results are independent of evaluation
// order and identical across thread counts.  The mixer is splitmix64, which
// is plenty for Monte Carlo volume work.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    // Uniform double in [0, 1) for sample i, coordinate dim.
    double uniform(std::uint64_t i, std::uint64_t dim) const {
        std::uint64_t x = mix(seed_ ^ mix(i ^ mix(dim + 0x9e3779b97f4a7c15ull)));
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double uniform(std::uint64_t i, std::uint64_t dim, double lo, double hi) const {
        return lo + (hi - lo) * uniform(i, dim);
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
};

} // namespace pluripot
