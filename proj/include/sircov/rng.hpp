#pragma once

#include <cmath>
#include <cstdint>

namespace sircov {

// splitmix64; used to expand (master_seed, stream index) into xoshiro state.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ stream. Each (master_seed, stream) pair gets a decorrelated
// state, so trials can be evaluated in any order on any number of threads.
class Rng {
public:
    Rng(std::uint64_t master_seed, std::uint64_t stream) {
        SplitMix64 sm(master_seed + stream * 0x9E3779B97F4A7C15ULL);
        for (auto& word : s_)
            word = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1]
    double uniform_pos() { return 1.0 - uniform(); }

    // unit-mean exponential (Rayleigh fading power gain)
    double exponential() { return -std::log(uniform_pos()); }

    // uniform point in a disc of given radius centred at (cx, cy)
    void point_in_disc(double radius, double cx, double cy, double& x, double& y) {
        const double r = radius * std::sqrt(uniform());
        const double theta = 6.283185307179586476925286766559 * uniform();
        x = cx + r * std::cos(theta);
        y = cy + r * std::sin(theta);
    }

    std::uint64_t poisson(double mean);

    // index uniform in [0, n)
    std::uint64_t index(std::uint64_t n) {
        // 53-bit uniform scaled; n is far below 2^53 in all uses here
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace sircov
