#pragma once

#include "sircov/model.hpp"

namespace sircov {

// Serving-distance law of a NOMA user.
//   PPP: f(x) = 2 c lambda_b pi x exp(-c lambda_b pi x^2)   (c = 5/4)
//   MCP: f(x) = 2 x / R^2 on [0, R]
double distance_pdf(const ModelConfig& model, double x);
double distance_cdf(const ModelConfig& model, double x);

// Inverse-CDF sampling; u in (0, 1).
double sample_distance(const ModelConfig& model, double u);

// Joint density of the ordered pair: 2 f(r1) f(r2) 1(r1 < r2).
double joint_ordered_pdf(const ModelConfig& model, const OrderedDistancePair& pair);

// P(h1 r1^-a > h2 r2^-a | r1, r2) for unit-mean exponential fading:
// 1 / (1 + (r1/r2)^alpha). In [1/2, 1] for r1 <= r2.
double ordering_probability_conditional(const OrderedDistancePair& pair, double alpha);

// Radius below which all but mass_eps of the serving-distance law lies.
double truncation_radius(const ModelConfig& model, double mass_eps);

// Unconditional P(near user is the instantaneously stronger one), by 2D
// quadrature of the conditional probability against the ordered joint pdf.
double ordering_probability_analytic(const ModelConfig& model, double tol = 1e-8);

}  // namespace sircov
