#include <doctest.h>

#include <cmath>
#include <memory>

#include "sircov/coverage.hpp"
#include "sircov/distance.hpp"
#include "sircov/simulate.hpp"

using namespace sircov;

namespace {

const ModelConfig kMcpBench = ModelConfig::mcp(1e-3, 10.0, 4.0);
const ModelConfig kPppBench = ModelConfig::ppp(1e-3, 4.0);

// Independent tensor Simpson over the ordered wedge, normalized MCP model.
double simpson_coverage_mcp(RankingScheme scheme, UserRole role, double t,
                            const LaplaceTransform& laplace) {
    const int n = 800;  // even
    const double h2 = 1.0 / n;
    auto inner = [&](double r2) {
        if (r2 == 0.0)
            return 0.0;
        const double h1 = r2 / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double r1 = i * h1;
            ConditionalCoverageInputs in;
            in.pair = OrderedDistancePair(std::min(r1, r2), r2);
            in.t = t;
            in.alpha = 4.0;
            in.laplace = &laplace;
            const double f = conditional_coverage(scheme, role, in) * 2.0 * r1;
            acc += f * (i == 0 || i == n ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0));
        }
        return acc * h1 / 3.0;
    };
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double r2 = j * h2;
        const double f = inner(r2) * 2.0 * r2;
        acc += f * (j == 0 || j == n ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0));
    }
    return 2.0 * acc * h2 / 3.0;
}

}  // namespace

TEST_CASE("vanishing-threshold limits of unconditional coverage") {
    // ISP/MSP tend to 1; the after-decoding curves flatten at the ordering
    // probability (pi/4 for the cluster model at alpha = 4)
    const auto lap_mcp = make_laplace(kMcpBench, {});
    for (int c = 0; c < kCombos; ++c) {
        const double limit =
            combo_scheme(c) == RankingScheme::MSP_AD ? kPi / 4.0 : 1.0;
        const double v = coverage(kMcpBench, combo_scheme(c), combo_role(c),
                                  SirThreshold::from_db(-120.0), *lap_mcp)
                             .value;
        CHECK(v == doctest::Approx(limit).epsilon(2e-4));
    }

    LaplaceOptions opts;
    opts.s_max_hint = laplace_argument_bound(kPppBench, 1e-12);
    const auto lap_ppp = make_laplace(kPppBench, opts);
    CHECK(coverage(kPppBench, RankingScheme::ISP, UserRole::Near,
                   SirThreshold::from_db(-120.0), *lap_ppp)
              .value == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("scheme ordering of unconditional coverage at 0 dB") {
    const auto lap = make_laplace(kMcpBench, {});
    const SirThreshold t = SirThreshold::from_db(0.0);
    for (UserRole role : {UserRole::Near, UserRole::Far}) {
        const double isp = coverage(kMcpBench, RankingScheme::ISP, role, t, *lap).value;
        const double msp = coverage(kMcpBench, RankingScheme::MSP, role, t, *lap).value;
        const double ad = coverage(kMcpBench, RankingScheme::MSP_AD, role, t, *lap).value;
        CHECK(ad <= msp + 2e-4);
        CHECK(msp <= isp + 2e-4);
        CHECK(isp <= 1.0 + 1e-12);
        CHECK(ad >= 0.0);
    }
}

TEST_CASE("adaptive coverage matches an independent Simpson oracle") {
    const McpLaplaceApprox laplace(0.1, 4.0);
    const SirThreshold t = SirThreshold::from_linear(1.0);
    for (const auto probe :
         {std::pair{RankingScheme::ISP, UserRole::Near},
          std::pair{RankingScheme::MSP, UserRole::Far},
          std::pair{RankingScheme::MSP_AD, UserRole::Far}}) {
        const double oracle = simpson_coverage_mcp(probe.first, probe.second, 1.0, laplace);
        const double adaptive =
            coverage(kMcpBench, probe.first, probe.second, t, laplace).value;
        CHECK(adaptive == doctest::Approx(oracle).epsilon(2e-4));
    }

    // frozen oracle values at 0 dB, closed-form evaluator
    CHECK(coverage(kMcpBench, RankingScheme::ISP, UserRole::Near, t, laplace).value ==
          doctest::Approx(0.741846).epsilon(3e-4));
    CHECK(coverage(kMcpBench, RankingScheme::ISP, UserRole::Far, t, laplace).value ==
          doctest::Approx(0.574653).epsilon(3e-4));
    CHECK(coverage(kMcpBench, RankingScheme::MSP, UserRole::Near, t, laplace).value ==
          doctest::Approx(0.640067).epsilon(3e-4));
    CHECK(coverage(kMcpBench, RankingScheme::MSP, UserRole::Far, t, laplace).value ==
          doctest::Approx(0.441567).epsilon(3e-4));
}

TEST_CASE("coverage is non-increasing in T and within [0, 1]") {
    const auto lap = make_laplace(kMcpBench, {});
    for (int c = 0; c < kCombos; ++c) {
        double prev = 1.0 + 1e-12;
        for (double db = -12.0; db <= 18.0; db += 5.0) {
            const double v = coverage(kMcpBench, combo_scheme(c), combo_role(c),
                                      SirThreshold::from_db(db), *lap)
                                 .value;
            CHECK(v <= prev + 2e-4);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("normalized and raw-coordinate paths agree") {
    // PPP: Table-1 evaluator with explicit lambda_b vs normalized production path
    {
        LaplaceOptions opts;
        opts.s_max_hint = laplace_argument_bound(kPppBench, 1.0);
        const auto norm = make_laplace(kPppBench, opts);
        const double reference =
            coverage(kPppBench, RankingScheme::ISP, UserRole::Near,
                     SirThreshold::from_linear(1.0), *norm)
                .value;

        const auto cached =
            make_cached(std::make_shared<PppLaplaceGeneral>(1e-3, 4.0),
                        laplace_argument_bound_unnormalized(kPppBench, 1.0));
        const double raw = coverage_unnormalized(kPppBench, RankingScheme::ISP,
                                                 UserRole::Near,
                                                 SirThreshold::from_linear(1.0), *cached)
                               .value;
        CHECK(raw == doctest::Approx(reference).epsilon(2e-4));
    }

    // MCP: two raw parameterizations with the same lambda_b R^2
    {
        const ModelConfig a = kMcpBench;                          // (1e-3, 10)
        const ModelConfig b = ModelConfig::mcp(2.5e-4, 20.0, 4.0);  // (lambda/4, 2R)
        double values[2];
        const ModelConfig* models[2] = {&a, &b};
        for (int k = 0; k < 2; ++k) {
            const auto cached = make_cached(
                std::make_shared<McpLaplaceExactGeneral>(models[k]->lambda_b,
                                                         models[k]->cluster_radius, 4.0),
                laplace_argument_bound_unnormalized(*models[k], 1.0));
            values[k] = coverage_unnormalized(*models[k], RankingScheme::ISP,
                                              UserRole::Near, SirThreshold::from_linear(1.0),
                                              *cached)
                            .value;
        }
        CHECK(std::fabs(values[0] - values[1]) <= 2e-4);
    }
}

TEST_CASE("mismatched evaluator and model is a configuration error") {
    const auto mcp_lap = make_laplace(kMcpBench, {});
    CHECK_THROWS_AS((void)coverage(kPppBench, RankingScheme::ISP, UserRole::Near,
                                   SirThreshold::from_linear(1.0), *mcp_lap),
                    ConfigError);

    const PppLaplaceGeneral general(1e-3, 4.0);
    CHECK_THROWS_AS((void)coverage(kPppBench, RankingScheme::ISP, UserRole::Near,
                                   SirThreshold::from_linear(1.0), general),
                    ConfigError);

    const McpLaplaceApprox wrong_scale(0.4, 4.0);
    CHECK_THROWS_AS((void)coverage(kMcpBench, RankingScheme::ISP, UserRole::Near,
                                   SirThreshold::from_linear(1.0), wrong_scale),
                    ConfigError);

    const McpLaplaceApprox wrong_alpha(0.1, 3.0);
    CHECK_THROWS_AS((void)coverage(kMcpBench, RankingScheme::ISP, UserRole::Near,
                                   SirThreshold::from_linear(1.0), wrong_alpha),
                    ConfigError);
}
