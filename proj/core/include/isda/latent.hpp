#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace isda {

/// Families of the scaled microdata weight U, all supported on [-1, 1].
enum class Family {
  kUniform,
  kTriangular,
  kInvertedTriangular,
  kTruncatedNormal,
  kShiftedBeta,
  kKde,
  kDegenerate,
};

std::string_view family_name(Family family);

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

class KdeModel;

/// Distribution of the latent weight U in V = C + U R / 2.
///
/// Immutable value type. Moments are computed once at construction; the KDE
/// family shares its precomputed CDF grid between copies, so copies are cheap
/// and safe to use concurrently.
class LatentDistribution {
 public:
  static LatentDistribution uniform();
  /// Triangular on [-1, 1] with mode in [-1, 1].
  static LatentDistribution triangular(double mode);
  /// V-shaped density |u| on [-1, 1].
  static LatentDistribution inverted_triangular();
  /// N(0, sigma2) truncated to [-1, 1]; sigma2 is the pre-truncation variance.
  static LatentDistribution truncated_normal(double sigma2 = 1.0 / 9.0);
  /// U = 2W - 1 with W ~ Beta(alpha, beta).
  static LatentDistribution shifted_beta(double alpha, double beta);
  /// Gaussian KDE of a scaled sample, reflected at -1 and +1. Bandwidth
  /// defaults to Silverman's rule on the sample.
  static LatentDistribution kde(std::vector<double> sample, std::optional<double> bandwidth = {},
                                std::string sample_path = {});
  /// Point mass at 0 (zero-range variables).
  static LatentDistribution degenerate();

  LatentDistribution();  // uniform

  [[nodiscard]] Family family() const { return family_; }
  [[nodiscard]] double mode() const;
  [[nodiscard]] double sigma2() const;
  [[nodiscard]] double alpha() const;
  [[nodiscard]] double beta() const;
  [[nodiscard]] double bandwidth() const;
  [[nodiscard]] std::size_t kde_sample_size() const;
  [[nodiscard]] const std::string& sample_path() const;

  /// Generalized inverse CDF; t must lie in (0, 1].
  [[nodiscard]] double quantile(double t) const;
  [[nodiscard]] double cdf(double u) const;
  [[nodiscard]] double density(double u) const;

  [[nodiscard]] double mean() const { return mean_; }
  [[nodiscard]] double second_moment() const { return second_moment_; }
  [[nodiscard]] double variance() const;
  [[nodiscard]] Moments moments() const { return {mean_, second_moment_, variance()}; }

  /// Points in (0, 1) where the quantile function is not smooth.
  [[nodiscard]] std::vector<double> breakpoints() const;

  [[nodiscard]] bool is_degenerate() const { return family_ == Family::kDegenerate; }
  /// True for families symmetric about 0 by construction.
  [[nodiscard]] bool is_symmetric() const;

  /// Short human-readable form, e.g. "triangular(m=-0.34)".
  [[nodiscard]] std::string describe() const;

  friend bool operator==(const LatentDistribution& a, const LatentDistribution& b);

 private:
  LatentDistribution(Family family, double p1, double p2);
  void compute_moments();

  Family family_ = Family::kUniform;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::shared_ptr<const KdeModel> kde_;
  double mean_ = 0.0;
  double second_moment_ = 1.0 / 3.0;
};

/// quantile/moments as free functions.
double quantile(const LatentDistribution& dist, double t);
Moments moments(const LatentDistribution& dist);

/// Integral of F1^{-1}(t) F2^{-1}(t) over (0, 1). Closed form for the pairs
/// derived by hand, otherwise cross_moment_quadrature.
double cross_moment(const LatentDistribution& d1, const LatentDistribution& d2);

/// Always numeric: adaptive Gauss-Legendre split at both distributions'
/// quantile breakpoints.
double cross_moment_quadrature(const LatentDistribution& d1, const LatentDistribution& d2,
                               double tol = 1e-11);

/// (E(U1,U2) - E U1 E U2) / sqrt(Var U1 Var U2). Throws std::domain_error
/// ("zero-variance latent") when either variance is zero.
double quantile_correlation(const LatentDistribution& d1, const LatentDistribution& d2);

/// Quantile of V = c + U r / 2. Throws std::domain_error for r < 0.
double microdata_quantile(double c, double r, const LatentDistribution& dist, double t);

/// Silverman's rule-of-thumb bandwidth.
double silverman_bandwidth(std::span<const double> sample);

}  // namespace isda
