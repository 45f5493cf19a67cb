#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sircov {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class PointProcess { PPP, MCP };

enum class RankingScheme { ISP, MSP, MSP_AD };

enum class UserRole { Near, Far };

const char* to_string(PointProcess kind);
const char* to_string(RankingScheme scheme);
const char* to_string(UserRole role);

// Voronoi cell-area correction in the PPP serving-distance law.
inline constexpr double kAreaCorrection = 1.25;  // c = 5/4

inline constexpr double kPi = 3.141592653589793238462643383279503;

// Spatial model parameters. Transmit power is unity throughout (it cancels
// from every SIR expression), so it has no field.
struct ModelConfig {
    PointProcess kind = PointProcess::PPP;
    double lambda_b = 1e-3;        // BS density per unit area
    double lambda_u = 0.0;         // user density (PPP); 0 = default 100*lambda_b
    double cluster_radius = 10.0;  // R (MCP)
    double alpha = 4.0;            // path-loss exponent
    double c = kAreaCorrection;

    static ModelConfig ppp(double lambda_b, double alpha, double lambda_u = 0.0) {
        ModelConfig m;
        m.kind = PointProcess::PPP;
        m.lambda_b = lambda_b;
        m.alpha = alpha;
        m.lambda_u = lambda_u;
        m.validate();
        return m;
    }

    static ModelConfig mcp(double lambda_b, double cluster_radius, double alpha) {
        ModelConfig m;
        m.kind = PointProcess::MCP;
        m.lambda_b = lambda_b;
        m.cluster_radius = cluster_radius;
        m.alpha = alpha;
        m.validate();
        return m;
    }

    double users_density() const { return lambda_u > 0.0 ? lambda_u : 100.0 * lambda_b; }

    // lambda_b * R^2; the only parameter the normalized MCP expressions keep.
    double mcp_scale() const { return lambda_b * cluster_radius * cluster_radius; }

    void validate() const;
};

// Equivalent model in normalized units: PPP uses
// lambda_b = 1/pi, MCP uses R = 1 with lambda_b carrying lambda_b*R^2.
// Coverage probabilities are invariant under this mapping.
ModelConfig normalized(const ModelConfig& model);

// Near/far serving distances of the typical NOMA pair, r1 <= r2.
struct OrderedDistancePair {
    double r1 = 0.0;
    double r2 = 0.0;

    OrderedDistancePair() = default;
    OrderedDistancePair(double near, double far) : r1(near), r2(far) {
        if (!(r1 >= 0.0) || !(r2 >= r1))
            throw ConfigError("OrderedDistancePair: need 0 <= r1 <= r2");
    }
};

struct SirThreshold {
    double linear = 1.0;

    static SirThreshold from_linear(double t) {
        if (!(t > 0.0))
            throw ConfigError("SirThreshold: T must be > 0");
        return SirThreshold{t};
    }
    static SirThreshold from_db(double t_db) {
        return SirThreshold{std::pow(10.0, t_db / 10.0)};
    }
    double db() const { return 10.0 * std::log10(linear); }
};

enum class Method { Analytic, MonteCarlo };

// A probability estimate plus how it was obtained.
struct CoverageEstimate {
    double value = 0.0;
    double ci_halfwidth = 0.0;  // 95% normal approximation (MC only)
    std::uint64_t trials = 0;   // MC only
    Method method = Method::Analytic;
    std::uint64_t seed = 0;     // MC only
};

}  // namespace sircov
