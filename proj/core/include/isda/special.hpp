#pragma once

// Scalar special functions used by the latent families: standard normal
// CDF/quantile and the regularized incomplete Beta function with its inverse.

namespace isda::special {

double normal_pdf(double x);
double normal_cdf(double x);

/// Inverse of the standard normal CDF. Accurate to a few ulps on (0,1).
double normal_quantile(double p);

/// log B(a, b).
double log_beta(double a, double b);

/// Regularized incomplete Beta I_x(a, b) for x in [0,1], a, b > 0.
double incomplete_beta(double a, double b, double x);

/// Solves I_x(a, b) = p for x. Newton refinement on a bracketed initial
/// guess, run until x stops moving at double precision. Where the density is
/// very steep (x near 1 with b < 1, or near 0 with a < 1) the residual
/// |I_x - p| is limited by the spacing of doubles around x.
double incomplete_beta_inverse(double a, double b, double p);

}  // namespace isda::special
