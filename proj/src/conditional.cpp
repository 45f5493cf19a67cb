#include "sircov/conditional.hpp"

#include <cmath>

namespace sircov {

namespace {

struct Terms {
    double w1, w2;        // r1^alpha, r2^alpha
    double inv1pa;        // 1/(1+a) = w2 / (w2 + T w1)
    double inv1pb;        // 1/(1+b) = w1 / (w1 + T w2)
    double inv1pbeta;     // 1/(1+beta) = w2 / (w2 + w1)
    double t;
    const LaplaceTransform* L;

    explicit Terms(const ConditionalCoverageInputs& in) {
        if (!(in.pair.r2 > 0.0))
            throw ConfigError("conditional coverage: degenerate pair (r2 = 0)");
        if (!(in.t > 0.0))
            throw ConfigError("conditional coverage: T must be > 0");
        if (in.laplace == nullptr)
            throw ConfigError("conditional coverage: missing Laplace evaluator");
        w1 = std::pow(in.pair.r1, in.alpha);
        w2 = std::pow(in.pair.r2, in.alpha);
        t = in.t;
        inv1pa = w2 / (w2 + t * w1);
        inv1pb = w1 / (w1 + t * w2);
        inv1pbeta = w2 / (w2 + w1);
        L = in.laplace;
    }

    // coefficient and Laplace factor of the T < 1 correction shared by the
    // ISP expressions: (1 - 1/(1+a) - 1/(1+b)) L(T/(1-T) (w1 + w2))
    double isp_correction() const {
        if (!(t < 1.0))
            return 0.0;
        const double coef = 1.0 - inv1pa - inv1pb;
        return coef * (*L)(t / (1.0 - t) * (w1 + w2));
    }

    // (1/(1+beta) - 1/(1+a)) L(T/(1-T) (w1 + w2)), the after-decoding
    // correction; nonpositive for T < 1
    double msp_ad_correction() const {
        if (!(t < 1.0))
            return 0.0;
        const double coef = inv1pbeta - inv1pa;
        return coef * (*L)(t / (1.0 - t) * (w1 + w2));
    }
};

}  // namespace

double cond_cov_isp_near(const ConditionalCoverageInputs& in) {
    const Terms k(in);
    const double t = k.t;
    return k.inv1pa * (*k.L)(t * k.w1) +
           k.inv1pb * (*k.L)(t * (k.w1 + k.w2) + t * t * k.w2) + k.isp_correction();
}

double cond_cov_isp_far(const ConditionalCoverageInputs& in) {
    const Terms k(in);
    const double t = k.t;
    return k.inv1pb * (*k.L)(t * k.w2) +
           k.inv1pa * (*k.L)(t * (k.w1 + k.w2) + t * t * k.w1) + k.isp_correction();
}

double cond_cov_msp_near(const ConditionalCoverageInputs& in) {
    const Terms k(in);
    return k.inv1pa * (*k.L)(k.t * k.w1);
}

double cond_cov_msp_far(const ConditionalCoverageInputs& in) {
    const Terms k(in);
    const double t = k.t;
    return k.inv1pa * (*k.L)(t * (k.w1 + k.w2) + t * t * k.w1);
}

double cond_cov_msp_ad_near(const ConditionalCoverageInputs& in) {
    const Terms k(in);
    return k.inv1pa * (*k.L)(k.t * k.w1) + k.msp_ad_correction();
}

double cond_cov_msp_ad_far(const ConditionalCoverageInputs& in) {
    const Terms k(in);
    const double t = k.t;
    return k.inv1pa * (*k.L)(t * (k.w1 + k.w2) + t * t * k.w1) + k.msp_ad_correction();
}

double conditional_coverage(RankingScheme scheme, UserRole role,
                            const ConditionalCoverageInputs& in) {
    switch (scheme) {
        case RankingScheme::ISP:
            return role == UserRole::Near ? cond_cov_isp_near(in) : cond_cov_isp_far(in);
        case RankingScheme::MSP:
            return role == UserRole::Near ? cond_cov_msp_near(in) : cond_cov_msp_far(in);
        default:
            return role == UserRole::Near ? cond_cov_msp_ad_near(in)
                                          : cond_cov_msp_ad_far(in);
    }
}

}  // namespace sircov
