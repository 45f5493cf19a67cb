#include "sircov/laplace.hpp"

#include <algorithm>
#include <cmath>

#include "sircov/parallel.hpp"
#include "sircov/quadrature.hpp"

namespace sircov {

namespace {

constexpr double kPairCorrelationRate = 12.0 / 5.0;  // inter-cell intensity fit constant

void check_s(double s) {
    if (!(s >= 0.0))
        throw ConfigError("laplace: s must be >= 0");
}

// 1 - (1 + w)^-2 = w (2 + w) / (1 + w)^2, stable for w -> 0 and w -> inf.
double one_minus_inv_sq(double w) {
    if (w > 1e12)
        return 1.0;
    const double onep = 1.0 + w;
    return w * (2.0 + w) / (onep * onep);
}

// Exponent of the PPP evaluator with intensity prefactor `pre` (2 pi lambda_b)
// and Gaussian rate q (12/5 lambda_b pi); the normalized form has pre = 2,
// q = 12/5.
double ppp_exponent(double s, double alpha, double pre, double q, double rel_tol) {
    auto integrand = [=](double x) {
        const double w = s * std::pow(x, -alpha);
        return one_minus_inv_sq(w) * (-std::expm1(-q * x * x)) * x;
    };
    const double scale = std::max(std::pow(s, 1.0 / alpha), 1.0 / std::sqrt(q));
    const auto r = quad::integrate_to_infinity(integrand, 0.0, scale, 1e-300, rel_tol);
    return pre * r.require(rel_tol);
}

// Complement of the mean of 1/(1 + s ||p - q||^-alpha) over q uniform in the
// disc b(0, R), for ||p|| = x: the average of s/(s + rho^alpha), written as a
// radial integral against the circle-overlap arc length 2 rho phi(rho).
// Working with the deficit keeps full relative accuracy when it is tiny
// (small s), which the exponent's log-log cache relies on.
double mcp_disc_deficit(double x, double s, double R, double alpha, double rel_tol) {
    auto q = [=](double rho) { return s / (s + std::pow(rho, alpha)); };

    const double area = kPi * R * R;
    double total = 0.0;

    const double full = R - x;  // circles with rho <= R - x lie inside entirely
    if (full > 0.0) {
        total += 2.0 * kPi *
                 quad::integrate([&](double rho) { return q(rho) * rho; }, 0.0, full,
                                 1e-280, rel_tol)
                     .value;
    }
    if (x > 0.0) {
        // partial arcs, rho in [|R-x|, R+x]; the substitution
        // rho = m - h cos(tau) absorbs the sqrt behaviour of phi at both ends.
        // phi comes from atan2 with the half-angle factorizations of 1 -+ u,
        // which stay exact where the direct cosine formula cancels.
        const double m = std::max(R, x);
        const double h = std::min(R, x);
        auto arc = [&](double tau) {
            const double s2 = std::sin(0.5 * tau);
            const double c2 = std::cos(0.5 * tau);
            const double rho = m - h * (c2 * c2 - s2 * s2);
            if (rho <= 0.0)
                return 0.0;
            const double a1 = x < R ? 2.0 * (R - x * c2 * c2) : 2.0 * R * s2 * s2;
            const double a2 = 2.0 * std::min(R, x) * c2 * c2;
            const double b1 = x < R ? 2.0 * x * s2 * s2 : 2.0 * (x - R * c2 * c2);
            const double b2 = x + rho + R;
            const double cos_num = (x - R) * (x + R) + rho * rho;
            const double phi = std::atan2(std::sqrt(std::max(a1 * a2 * b1 * b2, 0.0)),
                                          cos_num);
            return q(rho) * rho * 2.0 * phi * h * (2.0 * s2 * c2);
        };
        total += quad::integrate(arc, 0.0, kPi, 1e-280, rel_tol).value;
    }
    return total / area;
}

}  // namespace

namespace laplace_detail {

double disc_gain_mean(double x, double s, double radius, double alpha, double rel_tol) {
    return 1.0 - mcp_disc_deficit(x, s, radius, alpha, rel_tol);
}

}  // namespace laplace_detail

namespace {

double mcp_exponent(double s, double alpha, double lambda_b, double R, double rel_tol) {
    // the inner integral must resolve well below the outer tolerance, or its
    // truncation error shows up as noise the outer refinement chases
    const double inner_tol = std::max(0.01 * rel_tol, 1e-10);
    auto integrand = [=](double x) {
        // 1 - mean^2 = d (2 - d) for the deficit d = 1 - mean
        const double d = std::clamp(mcp_disc_deficit(x, s, R, alpha, inner_tol), 0.0, 1.0);
        return d * (2.0 - d) * x;
    };
    const double scale = std::max(2.0 * R, std::pow(s, 1.0 / alpha));
    const auto r = quad::integrate_to_infinity(integrand, 0.0, scale, 1e-300, rel_tol);
    return 2.0 * kPi * lambda_b * r.require(rel_tol);
}

}  // namespace

const char* to_string(LaplaceVariant variant) {
    switch (variant) {
        case LaplaceVariant::Auto: return "auto";
        case LaplaceVariant::Exact: return "exact";
        default: return "approx";
    }
}

UnitLaplace::UnitLaplace() {
    info_ = {Kind::Synthetic, 4.0, 0.0, 0.0};
}

ConstInterferenceLaplace::ConstInterferenceLaplace(double interference)
    : interference_(interference) {
    if (!(interference >= 0.0))
        throw ConfigError("ConstInterferenceLaplace: interference must be >= 0");
    info_ = {Kind::Synthetic, 4.0, 0.0, 0.0};
}

double ConstInterferenceLaplace::exponent(double s) const {
    check_s(s);
    return s * interference_;
}

PppLaplace::PppLaplace(double alpha, double quad_tol) {
    if (!(alpha > 2.0))
        throw ConfigError("PppLaplace: alpha must be > 2");
    info_ = {Kind::PppNormalized, alpha, 0.0, quad_tol};
}

double PppLaplace::exponent(double s) const {
    check_s(s);
    if (s == 0.0)
        return 0.0;
    return ppp_exponent(s, info_.alpha, 2.0, kPairCorrelationRate, info_.quad_tol);
}

PppLaplaceGeneral::PppLaplaceGeneral(double lambda_b, double alpha, double quad_tol)
    : lambda_b_(lambda_b) {
    if (!(lambda_b > 0.0) || !(alpha > 2.0))
        throw ConfigError("PppLaplaceGeneral: need lambda_b > 0 and alpha > 2");
    info_ = {Kind::PppGeneral, alpha, 0.0, quad_tol};
}

double PppLaplaceGeneral::exponent(double s) const {
    check_s(s);
    if (s == 0.0)
        return 0.0;
    return ppp_exponent(s, info_.alpha, 2.0 * kPi * lambda_b_,
                        kPairCorrelationRate * lambda_b_ * kPi, info_.quad_tol);
}

McpLaplaceExact::McpLaplaceExact(double scale, double alpha, double quad_tol) {
    if (!(scale > 0.0) || !(alpha > 2.0))
        throw ConfigError("McpLaplaceExact: need scale > 0 and alpha > 2");
    info_ = {Kind::McpExact, alpha, scale, quad_tol};
}

double McpLaplaceExact::exponent(double s) const {
    check_s(s);
    if (s == 0.0)
        return 0.0;
    return mcp_exponent(s, info_.alpha, info_.scale, 1.0, info_.quad_tol);
}

McpLaplaceExactGeneral::McpLaplaceExactGeneral(double lambda_b, double cluster_radius,
                                               double alpha, double quad_tol)
    : lambda_b_(lambda_b), radius_(cluster_radius) {
    if (!(lambda_b > 0.0) || !(cluster_radius > 0.0) || !(alpha > 2.0))
        throw ConfigError("McpLaplaceExactGeneral: invalid parameters");
    info_ = {Kind::McpExactGeneral, alpha, lambda_b * cluster_radius * cluster_radius,
             quad_tol};
}

double McpLaplaceExactGeneral::exponent(double s) const {
    check_s(s);
    if (s == 0.0)
        return 0.0;
    return mcp_exponent(s, info_.alpha, lambda_b_, radius_, info_.quad_tol);
}

McpLaplaceApprox::McpLaplaceApprox(double scale, double alpha) {
    if (!(scale > 0.0) || !(alpha > 2.0))
        throw ConfigError("McpLaplaceApprox: need scale > 0 and alpha > 2");
    delta_ = stable_exponent(alpha);
    coefficient_ = kPi * scale * (1.0 + delta_) / sinc(delta_);
    info_ = {Kind::McpApprox, alpha, scale, 0.0};
}

double McpLaplaceApprox::exponent(double s) const {
    check_s(s);
    if (s == 0.0)
        return 0.0;
    return coefficient_ * std::pow(s, delta_);
}

CachedLaplace::CachedLaplace(std::shared_ptr<const LaplaceTransform> base, double s_lo,
                             double s_hi, int points_per_decade, int threads)
    : base_(std::move(base)), s_lo_(s_lo), s_hi_(s_hi) {
    if (!(s_lo > 0.0) || !(s_hi > s_lo))
        throw ConfigError("CachedLaplace: need 0 < s_lo < s_hi");
    if (points_per_decade < 4)
        throw ConfigError("CachedLaplace: points_per_decade too small");

    const double t_lo = std::log(s_lo);
    const double t_hi = std::log(s_hi);
    const double decades = (t_hi - t_lo) / std::log(10.0);
    const std::size_t n =
        static_cast<std::size_t>(std::ceil(decades * points_per_decade)) + 2;

    std::vector<double> ts(n), zs(n);
    for (std::size_t i = 0; i < n; ++i)
        ts[i] = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(n - 1);

    const LaplaceTransform& src = *base_;
    parallel_chunks(n, effective_threads(threads),
                    [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                        for (std::uint64_t i = begin; i < end; ++i) {
                            const double g = src.exponent(std::exp(ts[i]));
                            zs[i] = std::log(std::max(g, 1e-300));
                        }
                    });
    log_exponent_ = MonotoneCubic(std::move(ts), std::move(zs));
}

double CachedLaplace::exponent(double s) const {
    check_s(s);
    if (s == 0.0)
        return 0.0;
    if (s > s_hi_)
        return base_->exponent(s);
    const double t = std::log(s);
    if (s < s_lo_) {
        // g behaves like a power law at small s; extend the first grid slope
        const double t0 = log_exponent_.x_front();
        return std::exp(log_exponent_(t0) + log_exponent_.slope_front() * (t - t0));
    }
    return std::exp(log_exponent_(t));
}

double CachedLaplace::find_negligible_s(const LaplaceTransform& base, double exponent_floor) {
    double s = 1.0;
    for (int i = 0; i < 40 && base.exponent(s) > exponent_floor; ++i)
        s *= 0.1;
    return s;
}

LaplaceVariant resolve_variant(const ModelConfig& model, LaplaceVariant variant) {
    if (model.kind == PointProcess::PPP || variant != LaplaceVariant::Auto)
        return variant;
    return model.mcp_scale() <= 0.1 ? LaplaceVariant::Approx : LaplaceVariant::Exact;
}

std::shared_ptr<const LaplaceTransform> make_cached(
    std::shared_ptr<const LaplaceTransform> base, double s_max_hint,
    int points_per_decade, int threads) {
    const auto kind = base->info().kind;
    // exact MCP nodes cost milliseconds; its exponent reaches the power-law
    // asymptote early, so the grid can stop higher and extend below
    const double floor = (kind == LaplaceTransform::Kind::McpExact ||
                          kind == LaplaceTransform::Kind::McpExactGeneral)
                             ? 1e-3
                             : 1e-6;
    const double s_hi = std::max(s_max_hint, 10.0) * 4.0;
    double s_lo = std::min(CachedLaplace::find_negligible_s(*base, floor), s_hi * 0.01);
    s_lo = std::max(s_lo, s_hi * 1e-22);
    return std::make_shared<CachedLaplace>(std::move(base), s_lo, s_hi, points_per_decade,
                                           threads);
}

std::shared_ptr<const LaplaceTransform> make_laplace(const ModelConfig& model,
                                                     const LaplaceOptions& options) {
    model.validate();
    std::shared_ptr<const LaplaceTransform> base;
    if (model.kind == PointProcess::PPP) {
        base = std::make_shared<PppLaplace>(model.alpha, options.quad_tol);
    } else {
        const LaplaceVariant variant = resolve_variant(model, options.variant);
        if (variant == LaplaceVariant::Approx)
            return std::make_shared<McpLaplaceApprox>(model.mcp_scale(), model.alpha);
        base = std::make_shared<McpLaplaceExact>(model.mcp_scale(), model.alpha,
                                                 std::max(options.quad_tol, 1e-7));
    }
    if (!options.cache)
        return base;
    return make_cached(std::move(base), options.s_max_hint, options.points_per_decade,
                       options.threads);
}

}  // namespace sircov
