#include "isda/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace isda::quadrature {

namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

constexpr int kMaxDepth = 40;

struct PanelSum {
  double value = 0.0;
  double magnitude = 0.0;  // same rule applied to |f|
};

PanelSum panel_with_magnitude(const Integrand& f, double a, double b) {
  static const GaussRule& rule = gauss_legendre(kPanelNodes);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  PanelSum out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = f(mid + half * rule.nodes[i]);
    out.value += rule.weights[i] * y;
    out.magnitude += rule.weights[i] * std::fabs(y);
  }
  out.value *= half;
  out.magnitude *= half;
  return out;
}

// Differences below what rounding in f can resolve on this panel stop the
// recursion; otherwise the halving tolerance would drive every noisy panel
// to kMaxDepth.
constexpr double kNoiseFloor = 1e3 * std::numeric_limits<double>::epsilon();

double refine(const Integrand& f, double a, double b, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const auto left = panel_with_magnitude(f, a, m);
  const auto right = panel_with_magnitude(f, m, b);
  const double both = left.value + right.value;
  const double err = std::fabs(both - whole);
  if (err <= tol || err <= kNoiseFloor * (left.magnitude + right.magnitude) || depth >= kMaxDepth ||
      !(m > a && m < b)) {
    return both;
  }
  return refine(f, a, m, left.value, 0.5 * tol, depth + 1) + refine(f, m, b, right.value, 0.5 * tol, depth + 1);
}

std::vector<double> panel_edges(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> edges{a};
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double gauss_panel(const Integrand& f, double a, double b) {
  static const GaussRule& rule = gauss_legendre(kPanelNodes);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

double adaptive(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                double tol) {
  if (!(b > a)) return 0.0;
  const auto edges = panel_edges(a, b, breakpoints);
  std::vector<double> parts;
  parts.reserve(edges.size());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i];
    const double hi = edges[i + 1];
    const double share = tol * (hi - lo) / (b - a);
    // t = lo + w (3u^2 - 2u^3): flattens power-law behaviour at both panel ends
    const double w = hi - lo;
    const Integrand g = [&](double u) {
      const double t = lo + w * u * u * (3.0 - 2.0 * u);
      return f(std::clamp(t, lo, hi)) * 6.0 * w * u * (1.0 - u);
    };
    parts.push_back(refine(g, 0.0, 1.0, gauss_panel(g, 0.0, 1.0), share, 0));
  }
  return compensated_sum(parts);
}

double graded_composite(const Integrand& f, int panels, std::span<const double> breakpoints) {
  if (panels < 1) throw std::invalid_argument("graded_composite: panels must be >= 1");
  std::vector<double> grid;
  for (int i = 0; i <= panels; ++i) grid.push_back(static_cast<double>(i) / panels);
  const double h = 1.0 / panels;
  constexpr int kLevels = 40;
  for (int k = 1; k <= kLevels; ++k) {
    const double g = h * std::ldexp(1.0, -k);
    grid.push_back(g);
    grid.push_back(1.0 - g);
  }
  for (double x : breakpoints) {
    if (x > 0.0 && x < 1.0) grid.push_back(x);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> parts;
  parts.reserve(grid.size());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) parts.push_back(gauss_panel(f, grid[i], grid[i + 1]));
  return compensated_sum(parts);
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace isda::quadrature
