#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "sircov/interp.hpp"
#include "sircov/model.hpp"

namespace sircov {

enum class LaplaceVariant { Auto, Exact, Approx };

const char* to_string(LaplaceVariant variant);

inline double stable_exponent(double alpha) { return 2.0 / alpha; }

// normalized sinc: sin(pi x) / (pi x)
inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

// Laplace transform of the inter-cell interference, L(s) = E[exp(-s I)].
// Implementations expose the exponent g(s) = -ln L(s); it is 0 at s = 0,
// nonnegative and nondecreasing, which keeps L in (0, 1].
class LaplaceTransform {
public:
    enum class Kind {
        PppNormalized,    // lambda_b = 1/pi form
        PppGeneral,       // explicit lambda_b form
        McpExact,         // R = 1 form, parameterized by lambda_b R^2
        McpExactGeneral,  // explicit (lambda_b, R) form
        McpApprox,        // small lambda_b R^2 closed form
        Synthetic,        // test evaluators (constant interference, unit)
    };

    struct Info {
        Kind kind = Kind::Synthetic;
        double alpha = 4.0;
        double scale = 0.0;  // lambda_b R^2 for MCP kinds
        double quad_tol = 0.0;
    };

    virtual ~LaplaceTransform() = default;

    virtual double exponent(double s) const = 0;
    virtual const Info& info() const = 0;

    double operator()(double s) const { return std::exp(-exponent(s)); }
};

class UnitLaplace final : public LaplaceTransform {
public:
    UnitLaplace();
    double exponent(double s) const override {
        if (!(s >= 0.0))
            throw ConfigError("laplace: s must be >= 0");
        return 0.0;
    }
    const Info& info() const override { return info_; }

private:
    Info info_;
};

// L(s) = exp(-s I) for deterministic interference power I; pairs the analytic
// conditional expressions with the brute-force fading oracle.
class ConstInterferenceLaplace final : public LaplaceTransform {
public:
    explicit ConstInterferenceLaplace(double interference);
    double exponent(double s) const override;
    const Info& info() const override { return info_; }

private:
    Info info_;
    double interference_;
};

// PPP user model, normalized (lambda_b = 1/pi):
//   g(s) = 2 Int_0^inf (1 - (1 + s x^-a)^-2) (1 - e^{-(12/5) x^2}) x dx
class PppLaplace final : public LaplaceTransform {
public:
    explicit PppLaplace(double alpha, double quad_tol = 1e-8);
    double exponent(double s) const override;
    const Info& info() const override { return info_; }

private:
    Info info_;
};

// PPP user model with explicit BS density (intensity function
// lambda_b (1 - e^{-(12/5) lambda_b pi x^2})); reduces to the normalized form
// under x -> x sqrt(pi lambda_b). Kept for scale-invariance checks.
class PppLaplaceGeneral final : public LaplaceTransform {
public:
    PppLaplaceGeneral(double lambda_b, double alpha, double quad_tol = 1e-8);
    double exponent(double s) const override;
    const Info& info() const override { return info_; }

private:
    Info info_;
    double lambda_b_;
};

// MCP user model, exact form. The inner double integral over the cluster
// disc is evaluated as a single radial integral against the circle-overlap
// arc length, cutting one integration level.
class McpLaplaceExact final : public LaplaceTransform {
public:
    // normalized form: disc radius 1, scale = lambda_b R^2
    explicit McpLaplaceExact(double scale, double alpha, double quad_tol = 1e-7);
    double exponent(double s) const override;
    const Info& info() const override { return info_; }

private:
    Info info_;
};

class McpLaplaceExactGeneral final : public LaplaceTransform {
public:
    McpLaplaceExactGeneral(double lambda_b, double cluster_radius, double alpha,
                           double quad_tol = 1e-7);
    double exponent(double s) const override;
    const Info& info() const override { return info_; }

private:
    Info info_;
    double lambda_b_;
    double radius_;
};

// Small lambda_b R^2 closed form:
//   g(s) = pi lambda_b R^2 (1 + delta) / sinc(delta) * s^delta,  delta = 2/alpha
class McpLaplaceApprox final : public LaplaceTransform {
public:
    McpLaplaceApprox(double scale, double alpha);
    double exponent(double s) const override;
    const Info& info() const override { return info_; }

private:
    Info info_;
    double coefficient_;
    double delta_;
};

// Memoizes the exponent of a base transform on a geometric s-grid and
// interpolates log g against log s with a monotone cubic. The table is built
// up-front, so concurrent readers need no synchronization; below the grid a
// power-law extension applies and above it the base transform is evaluated
// directly. Every path is a pure function of s, so cached and uncached calls
// agree to within the interpolation budget and are bitwise reproducible.
class CachedLaplace final : public LaplaceTransform {
public:
    CachedLaplace(std::shared_ptr<const LaplaceTransform> base, double s_lo, double s_hi,
                  int points_per_decade = 512, int threads = 0);

    double exponent(double s) const override;
    const Info& info() const override { return base_->info(); }

    double grid_lo() const { return s_lo_; }
    double grid_hi() const { return s_hi_; }

    // Largest s whose exponent still matters at the given resolution; used to
    // pick the grid's lower end. Below the grid the power-law extension takes
    // over, so the floor only needs to reach the asymptotic log-log regime.
    static double find_negligible_s(const LaplaceTransform& base, double exponent_floor = 1e-6);

private:
    std::shared_ptr<const LaplaceTransform> base_;
    MonotoneCubic log_exponent_;
    double s_lo_;
    double s_hi_;
};

namespace laplace_detail {

// Mean of 1/(1 + s ||p - q||^-alpha) over q uniform in the disc b(0, R),
// ||p|| = x: the inner double integral of the exact MCP transform, reduced to
// one radial integral. Exposed so tests can pit it against brute-force
// quadrature of the original (y, theta) form.
double disc_gain_mean(double x, double s, double radius, double alpha,
                      double rel_tol = 1e-9);

}  // namespace laplace_detail

struct LaplaceOptions {
    LaplaceVariant variant = LaplaceVariant::Auto;  // MCP only; PPP has one exact form
    double quad_tol = 1e-8;
    bool cache = true;
    double s_max_hint = 1e6;  // largest argument the caller expects to use
    int points_per_decade = 512;
    int threads = 0;
};

// Resolves Auto against the closed form's small-scale regime (approx iff
// lambda_b R^2 <= 0.1).
LaplaceVariant resolve_variant(const ModelConfig& model, LaplaceVariant variant);

// Builds the normalized-model evaluator matching `model` (raw parameters are
// mapped to the normalized form first).
std::shared_ptr<const LaplaceTransform> make_laplace(const ModelConfig& model,
                                                     const LaplaceOptions& options = {});

// Wraps any transform in a grid cache sized for arguments up to s_max_hint,
// picking the lower grid end from the transform's own decay.
std::shared_ptr<const LaplaceTransform> make_cached(
    std::shared_ptr<const LaplaceTransform> base, double s_max_hint,
    int points_per_decade = 512, int threads = 0);

}  // namespace sircov
