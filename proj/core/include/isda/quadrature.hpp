#pragma once

#include <functional>
#include <span>
#include <vector>

namespace isda::quadrature {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computed once per n by Newton iteration on P_n; cached.
const GaussRule& gauss_legendre(int n);

constexpr int kPanelNodes = 32;

using Integrand = std::function<double(double)>;

/// Plain Gauss-Legendre (kPanelNodes) on [a, b].
double gauss_panel(const Integrand& f, double a, double b);

/// Composite Gauss-Legendre over [a, b] with panel edges at every breakpoint
/// strictly inside (a, b). Each panel is mapped through the cubic
/// t = 3u^2 - 2u^3 (softens endpoint singularities) and bisected recursively
/// until two successive refinements agree to within its share of `tol`.
double adaptive(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                double tol = 1e-9);

/// Fixed composite rule on [0, 1]: `panels` equal panels, further split at
/// `breakpoints`, with the first and last panel graded geometrically toward
/// the endpoints (handles square-root endpoint behaviour of quantile
/// functions). Non-adaptive; used as an independent check.
double graded_composite(const Integrand& f, int panels, std::span<const double> breakpoints);

/// Sum with Neumaier compensation.
double compensated_sum(std::span<const double> values);

}  // namespace isda::quadrature
