#ifndef RETURNSTAT_RNG_HPP
#define RETURNSTAT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace returnstat {

// Splitmix64 stream. Small, fast, and reproducible across platforms,
// which matters more here than period: every Monte Carlo sample owns a
// stream derived from (master seed, cell salt, sample index), so results
// do not depend on the number of worker threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static RngStream derive(std::uint64_t master, std::uint64_t salt_a,
                            std::uint64_t salt_b = 0) {
        std::uint64_t s = mix(master);
        s = mix(s ^ (salt_a * 0xd6e8feb86659fd93ULL));
        s = mix(s ^ (salt_b * 0xa0761d6478bd642fULL));
        return RngStream(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0,1); safe as a log() argument.
    double next_unit_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, n) via Lemire's multiply-shift rejection.
    std::uint64_t next_below(std::uint64_t n) {
        while (true) {
            std::uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * n;
            std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= n || lo >= (0ULL - n) % n) return static_cast<std::uint64_t>(m >> 64);
        }
    }

private:
    std::uint64_t state_;
};

// One Poisson(t) draw by CDF inversion; t stays O(1) in this project.
inline std::uint64_t sample_poisson(double t, RngStream& rng) {
    double u = rng.next_unit_open();
    double pmf = std::exp(-t);
    double cdf = pmf;
    std::uint64_t k = 0;
    while (u > cdf && k < 100000) {
        ++k;
        pmf *= t / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

// One Geo(p) draw on {1,2,...} with pmf (1-p)p^{k-1}.
inline std::uint64_t sample_geometric(double p, RngStream& rng) {
    if (p <= 0.0) return 1;
    double u = rng.next_unit_open();
    return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log(p)));
}

}  // namespace returnstat

#endif
