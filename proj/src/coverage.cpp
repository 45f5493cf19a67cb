#include "sircov/coverage.hpp"

#include <cmath>

#include "sircov/distance.hpp"
#include "sircov/quadrature.hpp"

namespace sircov {

namespace {

constexpr double kTailMass = 1e-8;  // serving-distance mass ignored beyond ub

using Kind = LaplaceTransform::Kind;

void check_compatible(const ModelConfig& model, const LaplaceTransform& laplace,
                      bool normalized_path) {
    const auto& info = laplace.info();
    if (info.kind == Kind::Synthetic)
        return;
    if (std::fabs(info.alpha - model.alpha) > 1e-12)
        throw ConfigError("coverage: Laplace evaluator alpha does not match the model");
    if (model.kind == PointProcess::PPP) {
        const Kind want = normalized_path ? Kind::PppNormalized : Kind::PppGeneral;
        if (info.kind != want)
            throw ConfigError("coverage: Laplace evaluator kind does not match PPP model");
        return;
    }
    const bool ok = normalized_path
                        ? (info.kind == Kind::McpExact || info.kind == Kind::McpApprox)
                        : info.kind == Kind::McpExactGeneral;
    if (!ok)
        throw ConfigError("coverage: Laplace evaluator kind does not match MCP model");
    if (std::fabs(info.scale - model.mcp_scale()) > 1e-9 * (1.0 + model.mcp_scale()))
        throw ConfigError("coverage: Laplace evaluator scale does not match the model");
}

CoverageEstimate integrate_coverage(const ModelConfig& dist_model, RankingScheme scheme,
                                    UserRole role, double t, const LaplaceTransform& laplace,
                                    double tol) {
    if (!(tol > 0.0))
        throw ConfigError("coverage: tol must be > 0");
    const double ub = truncation_radius(dist_model, kTailMass);

    ConditionalCoverageInputs in;
    in.t = t;
    in.alpha = dist_model.alpha;
    in.laplace = &laplace;

    const double inner_tol = tol / 16.0;
    const double outer_tol = tol / 4.0;

    auto outer = [&](double r2) {
        const double f2 = distance_pdf(dist_model, r2);
        if (f2 == 0.0 || r2 == 0.0)
            return 0.0;
        auto integrand = [&](double r1) {
            ConditionalCoverageInputs cc = in;
            cc.pair.r1 = r1;
            cc.pair.r2 = r2;
            return conditional_coverage(scheme, role, cc) * distance_pdf(dist_model, r1);
        };
        return 2.0 * f2 * quad::integrate(integrand, 0.0, r2, inner_tol, 0.0).value;
    };

    const auto result = quad::integrate(outer, 0.0, ub, outer_tol, 0.0);

    CoverageEstimate est;
    est.value = result.require(tol);
    est.method = Method::Analytic;
    return est;
}

double argument_bound(double ub, double alpha, double t) {
    const double u = std::pow(ub, alpha);
    double bound = t * 2.0 * u + t * t * u;
    if (t < 1.0)
        bound = std::max(bound, t / (1.0 - t) * 2.0 * u);
    return bound;
}

}  // namespace

CoverageEstimate coverage(const ModelConfig& model, RankingScheme scheme, UserRole role,
                          SirThreshold threshold, const LaplaceTransform& laplace,
                          double tol) {
    model.validate();
    check_compatible(model, laplace, true);
    return integrate_coverage(normalized(model), scheme, role, threshold.linear, laplace,
                              tol);
}

CoverageEstimate coverage_unnormalized(const ModelConfig& model, RankingScheme scheme,
                                       UserRole role, SirThreshold threshold,
                                       const LaplaceTransform& laplace, double tol) {
    model.validate();
    check_compatible(model, laplace, false);
    return integrate_coverage(model, scheme, role, threshold.linear, laplace, tol);
}

double laplace_argument_bound(const ModelConfig& model, double t_linear) {
    const ModelConfig norm = normalized(model);
    return argument_bound(truncation_radius(norm, kTailMass), norm.alpha, t_linear);
}

double laplace_argument_bound_unnormalized(const ModelConfig& model, double t_linear) {
    return argument_bound(truncation_radius(model, kTailMass), model.alpha, t_linear);
}

}  // namespace sircov
