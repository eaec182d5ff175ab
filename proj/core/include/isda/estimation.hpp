#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isda/interval.hpp"
#include "isda/latent.hpp"
#include "isda/mallows.hpp"

namespace isda {

/// Scaled microdata u = 2 (v - c) / r pooled per variable, with the frame row
/// each value came from. Zero-range rows contribute nothing.
struct ScaledSample {
  std::vector<std::string> variables;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<std::size_t>> rows;

  [[nodiscard]] std::size_t index_of(const std::string& variable) const;
};

/// Maps microdata of one interval to [-1, 1]. Values within
/// 1e-9 * max(1, r) outside the interval are clamped; anything further out
/// throws std::domain_error naming the first offending index. r = 0 throws.
std::vector<double> scale_to_latent(std::span<const double> values, const Interval& interval);

/// Method-of-moments shifted Beta. Throws std::domain_error
/// ("moment condition violated") when s^2 >= m(1 - m) and
/// std::invalid_argument on constant or too-short samples.
LatentDistribution fit_beta_mom(std::span<const double> u);

/// Reflected Gaussian KDE; needs at least 10 values.
LatentDistribution fit_kde(std::span<const double> u, std::optional<double> bandwidth = {});

struct ModeEstimates {
  std::vector<double> modes;  // 3 median - 2 mean, row by row
  double average = 0.0;
};

ModeEstimates estimate_modes_pearson(std::span<const double> means, std::span<const double> medians);

struct SymmetryTest {
  bool reject = false;
  double p_value = 1.0;
  std::size_t n_used = 0;     // non-zero modes
  std::size_t k_positive = 0;
};

/// Exact two-sided binomial test of P(mode > 0) = 1/2, Bonferroni-corrected:
/// reject iff p < alpha / n_tests.
SymmetryTest test_mode_symmetry(std::span<const double> modes, double alpha, int n_tests);

/// Two-sided exact binomial p-value for k successes in n trials at p = 1/2,
/// min(1, 2 min(P[X <= k], P[X >= k])).
double binomial_two_sided_p(std::size_t k, std::size_t n);

/// One row of the partial-information input: per-cell summary statistics.
struct SummaryRow {
  std::string group;
  std::string variable;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct TriangularFit {
  std::string variable;
  std::vector<double> scaled_modes;  // 2 (mo - c) / r, clamped to [-1, 1]
  std::size_t clamped = 0;           // modes that fell outside [min, max]
  double m_hat = 0.0;
  SymmetryTest test;
  LatentDistribution latent;  // Triangular(m_hat), or Triangular(0) if not rejected
};

/// Pearson-mode pipeline for summary statistics. Variables keep their order
/// of first appearance; zero-range rows are skipped. n_tests defaults to the
/// number of variables.
std::vector<TriangularFit> fit_triangular_pearson(std::span<const SummaryRow> rows, double alpha = 0.05,
                                                  std::optional<int> n_tests = {});

/// What is known about one variable's latent.
struct LatentSource {
  std::optional<LatentDistribution> fitted;
  std::vector<double> sample;  // scaled values; may be empty
};

/// Psi and the E diagonal from sample moments when a sample exists, otherwise
/// from the fitted latent; off-diagonals from cross-moments of the fitted
/// quantile functions (a KDE is fitted when only a sample is given).
MomentSummary empirical_moment_summary(std::span<const LatentSource> sources);

}  // namespace isda
