#include "sircov/rng.hpp"

namespace sircov {

namespace {

// Knuth multiplication method; exact, cheap for small means.
std::uint64_t poisson_small(Rng& rng, double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.uniform_pos();
    } while (p > limit);
    return k - 1;
}

// PTRS transformed rejection (Hoermann 1993), exact for mean >= ~10.
std::uint64_t poisson_ptrs(Rng& rng, double mean) {
    const double slam = std::sqrt(mean);
    const double llam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform_pos();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * llam - mean - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

}  // namespace

std::uint64_t Rng::poisson(double mean) {
    if (mean <= 0.0)
        return 0;
    if (mean < 12.0)
        return poisson_small(*this, mean);
    return poisson_ptrs(*this, mean);
}

}  // namespace sircov
