#include "sircov/model.hpp"

namespace sircov {

const char* to_string(PointProcess kind) {
    return kind == PointProcess::PPP ? "ppp" : "mcp";
}

const char* to_string(RankingScheme scheme) {
    switch (scheme) {
        case RankingScheme::ISP: return "isp";
        case RankingScheme::MSP: return "msp";
        default: return "msp_ad";
    }
}

const char* to_string(UserRole role) {
    return role == UserRole::Near ? "near" : "far";
}

void ModelConfig::validate() const {
    if (!(lambda_b > 0.0))
        throw ConfigError("model.lambda_b: must be > 0");
    if (!(alpha > 2.0))
        throw ConfigError("model.alpha: must be > 2");
    if (c != kAreaCorrection)
        throw ConfigError("model.c: fixed to 5/4");
    if (kind == PointProcess::MCP) {
        if (!(cluster_radius > 0.0))
            throw ConfigError("model.r: cluster radius must be > 0");
    } else {
        // heavy-load guard: the at-least-two-users-per-cell assumption needs
        // lambda_u well above lambda_b
        if (lambda_u > 0.0 && lambda_u < 10.0 * lambda_b)
            throw ConfigError("model.lambda_u: must be >= 10 * lambda_b");
    }
}

ModelConfig normalized(const ModelConfig& model) {
    ModelConfig norm = model;
    if (model.kind == PointProcess::PPP) {
        norm.lambda_b = 1.0 / kPi;
        norm.lambda_u = 100.0 / kPi;
    } else {
        norm.lambda_b = model.mcp_scale();
        norm.cluster_radius = 1.0;
    }
    return norm;
}

}  // namespace sircov
