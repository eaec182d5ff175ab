#include "isda/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "isda/special.hpp"

namespace isda {

std::size_t ScaledSample::index_of(const std::string& variable) const {
  const auto it = std::find(variables.begin(), variables.end(), variable);
  if (it == variables.end()) throw std::out_of_range("no scaled sample for '" + variable + "'");
  return static_cast<std::size_t>(it - variables.begin());
}

std::vector<double> scale_to_latent(std::span<const double> values, const Interval& interval) {
  const double r = interval.range();
  if (!(r > 0.0)) throw std::domain_error("scale_to_latent: zero-range interval");
  const double c = interval.centre();
  const double tol = 1e-9 * std::max(1.0, r);
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (!(v >= interval.lower - tol && v <= interval.upper + tol)) {
      throw std::domain_error("scale_to_latent: value #" + std::to_string(k) + " (" + std::to_string(v) +
                              ") outside [" + std::to_string(interval.lower) + ", " +
                              std::to_string(interval.upper) + "]");
    }
    out.push_back(std::clamp(2.0 * (v - c) / r, -1.0, 1.0));
  }
  return out;
}

LatentDistribution fit_beta_mom(std::span<const double> u) {
  if (u.size() < 2) throw std::invalid_argument("fit_beta_mom: need at least 2 values");
  double m = 0.0;
  for (double x : u) {
    if (!(x >= -1.0 && x <= 1.0)) throw std::invalid_argument("fit_beta_mom: value outside [-1, 1]");
    m += 0.5 * (x + 1.0);
  }
  m /= static_cast<double>(u.size());
  double s2 = 0.0;
  for (double x : u) {
    const double d = 0.5 * (x + 1.0) - m;
    s2 += d * d;
  }
  s2 /= static_cast<double>(u.size());
  if (s2 == 0.0) throw std::invalid_argument("fit_beta_mom: constant sample");
  const double k = m * (1.0 - m) / s2 - 1.0;
  if (!(k > 0.0)) throw std::domain_error("moment condition violated");
  return LatentDistribution::shifted_beta(m * k, (1.0 - m) * k);
}

LatentDistribution fit_kde(std::span<const double> u, std::optional<double> bandwidth) {
  if (u.size() < 10) throw std::invalid_argument("fit_kde: need at least 10 values");
  for (double x : u) {
    if (!(x >= -1.0 && x <= 1.0)) throw std::invalid_argument("fit_kde: value outside [-1, 1]");
  }
  return LatentDistribution::kde({u.begin(), u.end()}, bandwidth);
}

ModeEstimates estimate_modes_pearson(std::span<const double> means, std::span<const double> medians) {
  if (means.size() != medians.size()) throw std::invalid_argument("estimate_modes_pearson: length mismatch");
  ModeEstimates out;
  out.modes.reserve(means.size());
  for (std::size_t k = 0; k < means.size(); ++k) out.modes.push_back(3.0 * medians[k] - 2.0 * means[k]);
  if (!out.modes.empty()) {
    double s = 0.0;
    for (double mo : out.modes) s += mo;
    out.average = s / static_cast<double>(out.modes.size());
  }
  return out;
}

double binomial_two_sided_p(std::size_t k, std::size_t n) {
  if (k > n) throw std::invalid_argument("binomial_two_sided_p: k > n");
  if (n == 0) return 1.0;
  const double a = static_cast<double>(k);
  const double b = static_cast<double>(n - k);
  // P[X <= k] = I_{1/2}(n - k, k + 1), P[X >= k] = I_{1/2}(k, n - k + 1)
  const double lower = k == n ? 1.0 : special::incomplete_beta(b, a + 1.0, 0.5);
  const double upper = k == 0 ? 1.0 : special::incomplete_beta(a, b + 1.0, 0.5);
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

SymmetryTest test_mode_symmetry(std::span<const double> modes, double alpha, int n_tests) {
  if (modes.empty()) throw std::invalid_argument("test_mode_symmetry: no modes");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("test_mode_symmetry: alpha must lie in (0, 1)");
  if (n_tests < 1) throw std::invalid_argument("test_mode_symmetry: n_tests must be >= 1");
  SymmetryTest out;
  for (double mo : modes) {
    if (mo == 0.0) continue;
    ++out.n_used;
    if (mo > 0.0) ++out.k_positive;
  }
  out.p_value = binomial_two_sided_p(out.k_positive, out.n_used);
  out.reject = out.p_value < alpha / n_tests;
  return out;
}

std::vector<TriangularFit> fit_triangular_pearson(std::span<const SummaryRow> rows, double alpha,
                                                  std::optional<int> n_tests) {
  std::vector<TriangularFit> fits;
  std::map<std::string, std::size_t> slot;
  for (const auto& row : rows) {
    auto [it, fresh] = slot.try_emplace(row.variable, fits.size());
    if (fresh) {
      fits.emplace_back();
      fits.back().variable = row.variable;
    }
    const double r = row.max - row.min;
    if (!(r > 0.0)) continue;
    const double c = 0.5 * (row.min + row.max);
    const double mo = estimate_modes_pearson(std::span(&row.mean, 1), std::span(&row.median, 1)).modes.front();
    double u = 2.0 * (mo - c) / r;
    if (u < -1.0 || u > 1.0) {
      ++fits[it->second].clamped;
      u = std::clamp(u, -1.0, 1.0);
    }
    fits[it->second].scaled_modes.push_back(u);
  }
  const int tests = n_tests.value_or(static_cast<int>(fits.size()));
  for (auto& fit : fits) {
    if (fit.scaled_modes.empty()) throw std::invalid_argument("fit_triangular_pearson: no usable rows for '" + fit.variable + "'");
    double s = 0.0;
    for (double u : fit.scaled_modes) s += u;
    fit.m_hat = s / static_cast<double>(fit.scaled_modes.size());
    fit.test = test_mode_symmetry(fit.scaled_modes, alpha, tests);
    fit.latent = LatentDistribution::triangular(fit.test.reject ? fit.m_hat : 0.0);
  }
  return fits;
}

MomentSummary empirical_moment_summary(std::span<const LatentSource> sources) {
  const std::size_t p = sources.size();
  std::vector<LatentDistribution> quantile_models;
  quantile_models.reserve(p);
  MomentSummary s;
  s.psi.resize(p);
  s.delta.resize(p);
  s.euu = Matrix(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    const auto& src = sources[i];
    if (!src.fitted && src.sample.empty()) {
      throw std::invalid_argument("empirical_moment_summary: variable #" + std::to_string(i) +
                                  " has neither a fitted latent nor a sample");
    }
    if (!src.sample.empty()) {
      double m1 = 0.0, m2 = 0.0;
      for (double u : src.sample) {
        m1 += u;
        m2 += u * u;
      }
      s.psi[i] = m1 / static_cast<double>(src.sample.size());
      s.euu(i, i) = m2 / static_cast<double>(src.sample.size());
    } else {
      s.psi[i] = src.fitted->mean();
      s.euu(i, i) = src.fitted->second_moment();
    }
    s.delta[i] = s.euu(i, i) / 4.0;
    quantile_models.push_back(src.fitted ? *src.fitted : fit_kde(src.sample));
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double e = cross_moment(quantile_models[i], quantile_models[j]);
      s.euu(i, j) = e;
      s.euu(j, i) = e;
    }
  }
  return s;
}

}  // namespace isda
