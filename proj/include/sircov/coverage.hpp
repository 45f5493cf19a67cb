#pragma once

#include "sircov/conditional.hpp"
#include "sircov/laplace.hpp"
#include "sircov/model.hpp"

namespace sircov {

// Unconditional coverage: the conditional probability integrated against the
// ordered joint distance pdf,
//   P = 2 Int_0^ub Int_0^r2 cond(r1, r2) f(r1) f(r2) dr1 dr2.
// Runs on the normalized model (PPP lambda_b = 1/pi, MCP R = 1), so the
// evaluator must be a normalized-form one built for the same model
// (make_laplace does this); a mismatch is a configuration error.
CoverageEstimate coverage(const ModelConfig& model, RankingScheme scheme, UserRole role,
                          SirThreshold threshold, const LaplaceTransform& laplace,
                          double tol = 1e-4);

// Same integral in raw coordinates against a general-form evaluator
// (PppLaplaceGeneral / McpLaplaceExactGeneral). The production path above is
// the normalized one; this exists so scale invariance can be verified
// numerically rather than by construction.
CoverageEstimate coverage_unnormalized(const ModelConfig& model, RankingScheme scheme,
                                       UserRole role, SirThreshold threshold,
                                       const LaplaceTransform& laplace, double tol = 1e-4);

// Upper bound on the Laplace argument the normalized coverage integral can
// request at threshold T; use the max over a sweep grid to size caches.
double laplace_argument_bound(const ModelConfig& model, double t_linear);

// Same bound for the raw-coordinate path.
double laplace_argument_bound_unnormalized(const ModelConfig& model, double t_linear);

}  // namespace sircov
