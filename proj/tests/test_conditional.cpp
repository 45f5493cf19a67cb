#include <doctest.h>

#include <cmath>
#include <vector>

#include "sircov/conditional.hpp"
#include "sircov/simulate.hpp"

using namespace sircov;

namespace {

const UnitLaplace kNoInterference;

ConditionalCoverageInputs make_inputs(double r1, double r2, double t, double alpha,
                                      const LaplaceTransform& laplace) {
    ConditionalCoverageInputs in;
    in.pair = OrderedDistancePair(r1, r2);
    in.t = t;
    in.alpha = alpha;
    in.laplace = &laplace;
    return in;
}

}  // namespace

TEST_CASE("small-threshold limits") {
    // ISP and MSP decode chains always succeed as T -> 0; the after-decoding
    // variants additionally require the near user to be the stronger one, so
    // they tend to P(h1 r1^-a > h2 r2^-a) = 1 / (1 + (r1/r2)^a) instead.
    const ConstInterferenceLaplace laplace(0.7);
    const auto in = make_inputs(0.6, 1.4, 1e-12, 4.0, laplace);
    const double ordering = 1.0 / (1.0 + std::pow(0.6 / 1.4, 4.0));
    for (int c = 0; c < kCombos; ++c) {
        const double limit =
            combo_scheme(c) == RankingScheme::MSP_AD ? ordering : 1.0;
        CHECK(conditional_coverage(combo_scheme(c), combo_role(c), in) ==
              doctest::Approx(limit).epsilon(1e-9));
    }
}

TEST_CASE("interference-free hand values") {
    // equidistant pair, T = 1/2: both ISP decode orders always succeed
    auto in = make_inputs(1.0, 1.0, 0.5, 4.0, kNoInterference);
    CHECK(cond_cov_isp_near(in) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cond_cov_isp_far(in) == doctest::Approx(1.0).epsilon(1e-12));

    // r1 = 1, r2 = 2, alpha = 4, T = 1: 16/17 + 1/17, third term disabled
    in = make_inputs(1.0, 2.0, 1.0, 4.0, kNoInterference);
    CHECK(cond_cov_isp_near(in) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cond_cov_msp_far(in) == doctest::Approx(16.0 / 17.0).epsilon(1e-12));

    // MSP with equal distances at T = 1 halves; ISP reaches 1 (the bound gap)
    in = make_inputs(1.0, 1.0, 1.0, 4.0, kNoInterference);
    CHECK(cond_cov_msp_near(in) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cond_cov_isp_near(in) == doctest::Approx(1.0).epsilon(1e-12));

    // after-decoding correction: equals P(h1 > h2) = 1/2 when T < 1, I = 0
    in = make_inputs(1.0, 1.0, 0.5, 4.0, kNoInterference);
    CHECK(cond_cov_msp_ad_near(in) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(cond_cov_isp_near(make_inputs(0.0, 0.0, 1.0, 4.0, kNoInterference)),
                    ConfigError);
    CHECK_THROWS_AS(cond_cov_msp_far(make_inputs(0.5, 1.0, 0.0, 4.0, kNoInterference)),
                    ConfigError);
    ConditionalCoverageInputs in = make_inputs(0.5, 1.0, 1.0, 4.0, kNoInterference);
    in.laplace = nullptr;
    CHECK_THROWS_AS(cond_cov_isp_far(in), ConfigError);
}

TEST_CASE("near user at zero distance always decodes") {
    const ConstInterferenceLaplace laplace(0.9);
    const auto in = make_inputs(0.0, 1.3, 2.5, 4.0, laplace);
    CHECK(cond_cov_isp_near(in) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cond_cov_msp_near(in) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cond_cov_msp_ad_near(in) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("third-term coefficient identity (T^2 - 1) / ((1+a)(1+b))") {
    Rng rng(31, 0);
    for (int i = 0; i < 300; ++i) {
        const double r2 = 0.1 + 2.0 * rng.uniform();
        const double r1 = r2 * rng.uniform();
        const double t = 0.05 + 0.9 * rng.uniform();  // T < 1 branch
        const double alpha = 3.0 + 3.0 * rng.uniform();

        const double a = t * std::pow(r1 / r2, alpha);
        const double b = t * std::pow(r2 / r1, alpha);
        const double expected =
            1.0 / (1.0 + a) + 1.0 / (1.0 + b) + (t * t - 1.0) / ((1.0 + a) * (1.0 + b));

        const auto in = make_inputs(r1, r2, t, alpha, kNoInterference);
        CHECK(cond_cov_isp_near(in) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(cond_cov_isp_far(in) == doctest::Approx(expected).epsilon(1e-12));
        // the coefficient is negative for T < 1; nothing may clamp it
        CHECK(1.0 - 1.0 / (1.0 + a) - 1.0 / (1.0 + b) < 0.0);
    }
}

TEST_CASE("after-decoding forms collapse to MSP at T >= 1") {
    const ConstInterferenceLaplace laplace(0.4);
    Rng rng(32, 0);
    for (const double t : {1.0, 1.7, 30.0}) {
        for (int i = 0; i < 50; ++i) {
            const double r2 = 0.1 + 2.0 * rng.uniform();
            const double r1 = r2 * rng.uniform();
            const auto in = make_inputs(r1, r2, t, 4.0, laplace);
            CHECK(cond_cov_msp_ad_near(in) == cond_cov_msp_near(in));
            CHECK(cond_cov_msp_ad_far(in) == cond_cov_msp_far(in));
        }
    }
}

TEST_CASE("pointwise bound chain MSP-AD <= MSP <= ISP") {
    const UnitLaplace unit;
    const ConstInterferenceLaplace weak(0.3);
    const ConstInterferenceLaplace strong(2.0);
    Rng rng(33, 0);
    const LaplaceTransform* evaluators[] = {&unit, &weak, &strong};
    for (const LaplaceTransform* laplace : evaluators) {
        for (int i = 0; i < 200; ++i) {
            const double r2 = 0.05 + 2.0 * rng.uniform();
            const double r1 = r2 * rng.uniform();
            const double t = std::pow(10.0, -2.0 + 3.0 * rng.uniform());
            const double alpha = 3.0 + 3.0 * rng.uniform();
            const auto in = make_inputs(r1, r2, t, alpha, *laplace);
            const double slack = 1e-12;
            CHECK(cond_cov_msp_ad_near(in) <= cond_cov_msp_near(in) + slack);
            CHECK(cond_cov_msp_near(in) <= cond_cov_isp_near(in) + slack);
            CHECK(cond_cov_msp_ad_far(in) <= cond_cov_msp_far(in) + slack);
            CHECK(cond_cov_msp_far(in) <= cond_cov_isp_far(in) + slack);
        }
    }
}

TEST_CASE("continuity across the T = 1 branch") {
    const ConstInterferenceLaplace laplace(0.5);
    Rng rng(34, 0);
    for (int i = 0; i < 100; ++i) {
        const double r2 = 0.1 + 2.0 * rng.uniform();
        const double r1 = r2 * rng.uniform();
        for (int c = 0; c < kCombos; ++c) {
            auto lo = make_inputs(r1, r2, 1.0 - 1e-11, 4.0, laplace);
            auto hi = make_inputs(r1, r2, 1.0 + 1e-11, 4.0, laplace);
            const double below = conditional_coverage(combo_scheme(c), combo_role(c), lo);
            const double above = conditional_coverage(combo_scheme(c), combo_role(c), hi);
            CHECK(std::fabs(below - above) <= 1e-9);
        }
    }
}

TEST_CASE("conditional coverage is non-increasing in T") {
    const ConstInterferenceLaplace laplace(0.4);
    const double pairs[][2] = {{0.3, 0.9}, {1.0, 1.0}, {0.2, 1.9}};
    for (const auto& p : pairs) {
        for (int c = 0; c < kCombos; ++c) {
            double prev = 2.0;
            for (int k = 0; k <= 300; ++k) {
                const double t = std::pow(10.0, -2.0 + 3.0 * k / 300.0);  // crosses T = 1
                const auto in = make_inputs(p[0], p[1], t, 4.0, laplace);
                const double v = conditional_coverage(combo_scheme(c), combo_role(c), in);
                CHECK(v <= prev + 1e-12);
                CHECK(v >= 0.0);
                CHECK(v <= 1.0 + 1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("closed forms match the fading oracle at pinned tuples") {
    struct Tuple {
        double r1, r2, alpha, t, interference;
    };
    const Tuple tuples[] = {
        {1.0, 1.5, 4.0, 0.8, 0.3},
        {1.0, 1.5, 4.0, 0.5, 0.3},
        {1.0, 2.0, 4.0, 0.7, 0.5},
    };
    const std::uint64_t draws = 1000000;
    const double tol = 3.0 / std::sqrt(static_cast<double>(draws));
    for (const Tuple& tu : tuples) {
        const OrderedDistancePair pair(tu.r1, tu.r2);
        const OracleResult oracle =
            fading_oracle(pair, tu.alpha, tu.t, tu.interference, draws, 99001);
        const ConstInterferenceLaplace laplace(tu.interference);
        const auto in = make_inputs(tu.r1, tu.r2, tu.t, tu.alpha, laplace);
        for (int c = 0; c < kCombos; ++c) {
            const double closed = conditional_coverage(combo_scheme(c), combo_role(c), in);
            CHECK(std::fabs(closed - oracle.probability[c]) <= tol);
        }
    }
}
