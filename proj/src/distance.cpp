#include "sircov/distance.hpp"

#include <cmath>

#include "sircov/quadrature.hpp"

namespace sircov {

double distance_pdf(const ModelConfig& model, double x) {
    if (x < 0.0)
        return 0.0;
    if (model.kind == PointProcess::PPP) {
        const double q = model.c * model.lambda_b * kPi;
        return 2.0 * q * x * std::exp(-q * x * x);
    }
    const double R = model.cluster_radius;
    return (x <= R) ? 2.0 * x / (R * R) : 0.0;
}

double distance_cdf(const ModelConfig& model, double x) {
    if (x <= 0.0)
        return 0.0;
    if (model.kind == PointProcess::PPP) {
        const double q = model.c * model.lambda_b * kPi;
        return 1.0 - std::exp(-q * x * x);
    }
    const double R = model.cluster_radius;
    return (x < R) ? (x * x) / (R * R) : 1.0;
}

double sample_distance(const ModelConfig& model, double u) {
    if (!(u > 0.0) || !(u < 1.0))
        throw ConfigError("sample_distance: u must lie in (0, 1)");
    if (model.kind == PointProcess::PPP) {
        const double q = model.c * model.lambda_b * kPi;
        return std::sqrt(-std::log1p(-u) / q);
    }
    return model.cluster_radius * std::sqrt(u);
}

double joint_ordered_pdf(const ModelConfig& model, const OrderedDistancePair& pair) {
    if (!(pair.r1 < pair.r2))
        return 0.0;  // ties carry zero measure
    return 2.0 * distance_pdf(model, pair.r1) * distance_pdf(model, pair.r2);
}

double ordering_probability_conditional(const OrderedDistancePair& pair, double alpha) {
    if (!(pair.r2 > 0.0))
        throw ConfigError("ordering_probability_conditional: degenerate pair (r2 = 0)");
    return 1.0 / (1.0 + std::pow(pair.r1 / pair.r2, alpha));
}

double truncation_radius(const ModelConfig& model, double mass_eps) {
    if (model.kind == PointProcess::MCP)
        return model.cluster_radius;
    const double q = model.c * model.lambda_b * kPi;
    return std::sqrt(-std::log(mass_eps) / q);
}

double ordering_probability_analytic(const ModelConfig& model, double tol) {
    const double ub = truncation_radius(model, 1e-12);
    const double alpha = model.alpha;

    auto outer = [&](double r2) {
        const double inner = quad::integrate(
                                 [&](double r1) {
                                     return distance_pdf(model, r1) /
                                            (1.0 + std::pow(r1 / r2, alpha));
                                 },
                                 0.0, r2, 0.25 * tol / ub, 0.1 * tol)
                                 .value;
        return 2.0 * distance_pdf(model, r2) * inner;
    };
    return quad::integrate(outer, 0.0, ub, 0.25 * tol, 0.1 * tol).require(tol);
}

}  // namespace sircov
