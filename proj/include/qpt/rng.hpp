// rng.hpp — seeded, platform-independent sampling.
//
// std::mt19937_64 is fully specified by the standard; the distributions are
// not, so the samplers here are hand-rolled to keep outputs byte-identical
// across standard libraries.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qpt {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic per-record stream seed; results do not depend on the order in
// which records are simulated.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x9d1cULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // +1 with probability (1+mean)/2, else -1; returns the average of n draws
    double sample_pm1_mean(double mean, long n) {
        const double p = 0.5 * (1.0 + mean);
        long plus = 0;
        for (long i = 0; i < n; ++i)
            if (bernoulli(p)) ++plus;
        return (2.0 * static_cast<double>(plus) - static_cast<double>(n)) / static_cast<double>(n);
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Halton low-discrepancy point, component d of point n (both 0-based), in [0, 1).
inline double halton(std::uint64_t n, int d) {
    static constexpr int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                     41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
    const int base = primes[d % (sizeof(primes) / sizeof(primes[0]))];
    double f = 1.0, r = 0.0;
    std::uint64_t i = n + 1;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

} // namespace qpt
