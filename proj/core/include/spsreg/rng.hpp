#ifndef SPSREG_RNG_HPP
#define SPSREG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace spsreg {

// Seedable, splittable random stream.
//
// The engine is std::mt19937_64 (its output sequence is fixed by the C++
// standard), and all floating-point transforms are spelled out here instead of
// using std::*_distribution, whose sequences are implementation-defined.  This
// keeps every simulated trajectory bit-reproducible across compilers and
// standard libraries, which the test goldens and the multi-threaded harness
// rely on.
//
// split(key) derives an independent child stream from the *identity* of this
// stream (its seed), never from its draw position, so
//   root.split(i) == same stream no matter how many draws root has made.
// Trials, and independent purposes inside one trial, each get their own split.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed)
        : id_(seed), engine_(mix(seed)) {}

    RngStream split(std::uint64_t key) const {
        return RngStream(mix(id_ + 0x9E3779B97F4A7C15ULL * (key + 1)));
    }

    std::uint64_t seed() const { return id_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via Box-Muller (cosine branch only; two uniforms per
    // draw, no cached state).
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // Rademacher sign in {-1,+1}.
    int sign() { return (next_u64() >> 63) ? 1 : -1; }

    // Uniform integer in [0, bound) without modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % bound;
    }

    // Fisher-Yates permutation of {0,...,m-1}.
    std::vector<int> permutation(int m) {
        std::vector<int> p(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) p[static_cast<std::size_t>(i)] = i;
        for (int i = m - 1; i > 0; --i) {
            const auto j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
        }
        return p;
    }

private:
    // splitmix64 finalizer; decorrelates nearby seeds before they reach the engine.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t id_;
    std::mt19937_64 engine_;
};

} // namespace spsreg

#endif
