#pragma once

#include <cstdint>
#include <vector>

namespace slantgeo {

// Deterministic xoshiro256** generator seeded through splitmix64.
// The standard <random> distributions are implementation-defined, which would
// break the byte-identical report contract, so sampling is done by hand here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // independent stream keyed by (tag_a, tag_b); does not advance this stream
    Rng fork(std::uint64_t tag_a, std::uint64_t tag_b = 0) const {
        std::uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ULL + tag_a);
        std::uint64_t h = splitmix64(x);
        x ^= h + 0xbf58476d1ce4e5b9ULL * (tag_b + 1);
        return Rng(splitmix64(x));
    }

    // random coefficients in [-1,1]^n with norm bounded away from zero
    std::vector<double> coefficients(int n) {
        std::vector<double> c(static_cast<std::size_t>(n));
        while (true) {
            double s2 = 0;
            for (auto& v : c) {
                v = uniform(-1.0, 1.0);
                s2 += v * v;
            }
            if (s2 > 1e-4) return c;
        }
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t seed_;
    std::uint64_t state_[4];
};

}  // namespace slantgeo
