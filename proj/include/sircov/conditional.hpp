#pragma once

#include "sircov/laplace.hpp"
#include "sircov/model.hpp"

namespace sircov {

// Conditional SIR coverage probabilities given the pair distances, one per
// (ranking scheme, user role). All expressions share the intermediates
//   a = T (r1/r2)^alpha,  b = T (r2/r1)^alpha,  beta = (r1/r2)^alpha,
// evaluated in forms that stay finite at r1 = 0. The T < 1 indicator is
// strict: at T = 1 exactly the (possibly negative) correction term is absent.
struct ConditionalCoverageInputs {
    OrderedDistancePair pair;
    double t = 1.0;      // linear SIR threshold
    double alpha = 4.0;  // path-loss exponent
    const LaplaceTransform* laplace = nullptr;
};

double cond_cov_isp_near(const ConditionalCoverageInputs& in);
double cond_cov_isp_far(const ConditionalCoverageInputs& in);
double cond_cov_msp_near(const ConditionalCoverageInputs& in);
double cond_cov_msp_far(const ConditionalCoverageInputs& in);
double cond_cov_msp_ad_near(const ConditionalCoverageInputs& in);
double cond_cov_msp_ad_far(const ConditionalCoverageInputs& in);

double conditional_coverage(RankingScheme scheme, UserRole role,
                            const ConditionalCoverageInputs& in);

}  // namespace sircov
