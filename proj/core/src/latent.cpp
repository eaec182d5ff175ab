#include "isda/latent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "isda/quadrature.hpp"
#include "isda/special.hpp"

namespace isda {

// Reflected Gaussian KDE on [-1, 1], tabulated on a fixed grid. The CDF is a
// monotone cubic Hermite interpolant through the grid values, with the KDE
// density as node slopes (Fritsch-Carlson limited).
class KdeModel {
 public:
  static constexpr int kGrid = 4096;

  KdeModel(std::vector<double> sample, double bandwidth, std::string path)
      : sample_(std::move(sample)), bandwidth_(bandwidth), path_(std::move(path)) {
    build();
  }

  [[nodiscard]] double bandwidth() const { return bandwidth_; }
  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] const std::vector<double>& sample() const { return sample_; }

  [[nodiscard]] double cdf(double u) const {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const auto [j, s] = locate(u);
    return hermite(j, s);
  }

  [[nodiscard]] double density(double u) const {
    if (u < -1.0 || u > 1.0) return 0.0;
    const auto [j, s] = locate(u);
    return hermite_slope(j, s);
  }

  [[nodiscard]] double quantile(double t) const {
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), t);
    if (it == cdf_.begin()) return -1.0;
    if (it == cdf_.end()) return 1.0;
    const int j = static_cast<int>(it - cdf_.begin()) - 1;
    // F(s) is monotone on [0, 1] within the cell; bracketed Newton.
    double lo = 0.0;
    double hi = 1.0;
    double s = (cdf_[j + 1] > cdf_[j]) ? (t - cdf_[j]) / (cdf_[j + 1] - cdf_[j]) : 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double f = hermite(j, s) - t;
      if (f < 0.0) lo = s; else hi = s;
      if (hi - lo < 1e-14) break;
      const double slope = hermite_slope(j, s) * dx_;
      double next = (slope > 0.0) ? s - f / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::fabs(next - s) < 1e-15) {
        s = next;
        break;
      }
      s = next;
    }
    return std::clamp(-1.0 + (j + s) * dx_, -1.0, 1.0);
  }

 private:
  [[nodiscard]] std::pair<int, double> locate(double u) const {
    const double pos = (u + 1.0) / dx_;
    int j = static_cast<int>(std::floor(pos));
    j = std::clamp(j, 0, kGrid - 2);
    return {j, pos - j};
  }

  [[nodiscard]] double hermite(int j, double s) const {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * cdf_[j] + (s3 - 2 * s2 + s) * dx_ * slope_[j] +
           (-2 * s3 + 3 * s2) * cdf_[j + 1] + (s3 - s2) * dx_ * slope_[j + 1];
  }

  [[nodiscard]] double hermite_slope(int j, double s) const {
    const double s2 = s * s;
    return (6 * s2 - 6 * s) * (cdf_[j] - cdf_[j + 1]) / dx_ + (3 * s2 - 4 * s + 1) * slope_[j] +
           (3 * s2 - 2 * s) * slope_[j + 1];
  }

  void build() {
    const int n_grid = kGrid;
    dx_ = 2.0 / (n_grid - 1);
    // Linear binning onto the grid.
    std::vector<double> bins(n_grid, 0.0);
    const double inv_n = 1.0 / static_cast<double>(sample_.size());
    for (double x : sample_) {
      const double pos = (std::clamp(x, -1.0, 1.0) + 1.0) / dx_;
      int k = std::min(static_cast<int>(std::floor(pos)), n_grid - 2);
      const double frac = pos - k;
      bins[k] += (1.0 - frac) * inv_n;
      bins[k + 1] += frac * inv_n;
    }
    // Images: original at p = k, reflection about -1 at p = -k, about +1 at
    // p = 2(N-1) - k. Positions are offset so the array starts at 0.
    const int offset = n_grid - 1;
    const int n_pos = 3 * n_grid - 2;
    std::vector<double> mass(n_pos, 0.0);
    for (int k = 0; k < n_grid; ++k) {
      if (bins[k] == 0.0) continue;
      mass[k + offset] += bins[k];
      mass[-k + offset] += bins[k];
      mass[2 * (n_grid - 1) - k + offset] += bins[k];
    }
    std::vector<double> prefix(n_pos + 1, 0.0);
    for (int p = 0; p < n_pos; ++p) prefix[p + 1] = prefix[p] + mass[p];

    const double step = dx_ / bandwidth_;
    const int window = static_cast<int>(std::min<double>(std::ceil(10.0 / step), n_pos));
    std::vector<double> pdf_table(window + 1);
    std::vector<double> cdf_table(2 * window + 1);
    for (int d = 0; d <= window; ++d) pdf_table[d] = special::normal_pdf(d * step) / bandwidth_;
    for (int d = -window; d <= window; ++d) cdf_table[d + window] = special::normal_cdf(d * step);

    std::vector<double> dens(n_grid, 0.0);
    std::vector<double> cum(n_grid, 0.0);
    for (int j = 0; j < n_grid; ++j) {
      const int centre = j + offset;
      const int lo = std::max(0, centre - window);
      const int hi = std::min(n_pos - 1, centre + window);
      double f = 0.0;
      double c = prefix[lo];
      for (int p = lo; p <= hi; ++p) {
        if (mass[p] == 0.0) continue;
        const int d = centre - p;
        f += mass[p] * pdf_table[std::abs(d)];
        c += mass[p] * cdf_table[d + window];
      }
      dens[j] = f;
      cum[j] = c;
    }
    const double base = cum[0];
    const double total = cum[n_grid - 1] - base;
    if (!(total > 0.0)) throw std::domain_error("kde: degenerate fit");
    cdf_.resize(n_grid);
    slope_.resize(n_grid);
    for (int j = 0; j < n_grid; ++j) {
      cdf_[j] = std::clamp((cum[j] - base) / total, 0.0, 1.0);
      slope_[j] = dens[j] / total;
    }
    cdf_[0] = 0.0;
    cdf_[n_grid - 1] = 1.0;
    for (int j = 1; j < n_grid; ++j) cdf_[j] = std::max(cdf_[j], cdf_[j - 1]);
    // Fritsch-Carlson limiting keeps each cell monotone.
    for (int j = 0; j + 1 < n_grid; ++j) {
      const double secant = (cdf_[j + 1] - cdf_[j]) / dx_;
      if (secant <= 0.0) {
        slope_[j] = 0.0;
        slope_[j + 1] = 0.0;
        continue;
      }
      const double a = slope_[j] / secant;
      const double b = slope_[j + 1] / secant;
      const double r2 = a * a + b * b;
      if (r2 > 9.0) {
        const double tau = 3.0 / std::sqrt(r2);
        slope_[j] = tau * a * secant;
        slope_[j + 1] = tau * b * secant;
      }
    }
  }

  std::vector<double> sample_;
  double bandwidth_;
  std::string path_;
  double dx_ = 0.0;
  std::vector<double> cdf_;
  std::vector<double> slope_;
};

namespace {

constexpr double kMomentTol = 1e-11;

double triangular_quantile(double m, double t) {
  const double split = 0.5 * (m + 1.0);
  if (t <= split) return -1.0 + std::sqrt(2.0 * t * (m + 1.0));
  return 1.0 - std::sqrt(2.0 * (1.0 - t) * (1.0 - m));
}

double truncated_normal_quantile(double sigma2, double t) {
  const double sigma = std::sqrt(sigma2);
  const double tail = special::normal_cdf(-1.0 / sigma);
  const double mass = 1.0 - 2.0 * tail;
  double z;
  if (t <= 0.5) {
    z = special::normal_quantile(tail + t * mass);
  } else {
    z = -special::normal_quantile(tail + (1.0 - t) * mass);
  }
  return std::clamp(sigma * z, -1.0, 1.0);
}

void check_probability(double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw std::domain_error("quantile: t must lie in (0, 1]");
  }
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kUniform: return "uniform";
    case Family::kTriangular: return "triangular";
    case Family::kInvertedTriangular: return "inverted_triangular";
    case Family::kTruncatedNormal: return "truncated_normal";
    case Family::kShiftedBeta: return "shifted_beta";
    case Family::kKde: return "kde";
    case Family::kDegenerate: return "degenerate";
  }
  return "unknown";
}

LatentDistribution::LatentDistribution() : LatentDistribution(Family::kUniform, 0.0, 0.0) {}

LatentDistribution::LatentDistribution(Family family, double p1, double p2)
    : family_(family), p1_(p1), p2_(p2) {}

LatentDistribution LatentDistribution::uniform() { return {Family::kUniform, 0.0, 0.0}; }

LatentDistribution LatentDistribution::triangular(double mode) {
  if (!(mode >= -1.0 && mode <= 1.0)) throw std::domain_error("triangular: mode must lie in [-1, 1]");
  LatentDistribution d(Family::kTriangular, mode, 0.0);
  d.compute_moments();
  return d;
}

LatentDistribution LatentDistribution::inverted_triangular() {
  LatentDistribution d(Family::kInvertedTriangular, 0.0, 0.0);
  d.compute_moments();
  return d;
}

LatentDistribution LatentDistribution::truncated_normal(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::domain_error("truncated_normal: sigma2 must be positive and finite");
  }
  LatentDistribution d(Family::kTruncatedNormal, sigma2, 0.0);
  d.compute_moments();
  return d;
}

LatentDistribution LatentDistribution::shifted_beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::domain_error("shifted_beta: alpha and beta must be positive and finite");
  }
  LatentDistribution d(Family::kShiftedBeta, alpha, beta);
  d.compute_moments();
  return d;
}

LatentDistribution LatentDistribution::kde(std::vector<double> sample, std::optional<double> bandwidth,
                                           std::string sample_path) {
  if (sample.size() < 2) throw std::domain_error("kde: need at least two values");
  for (double x : sample) {
    if (!std::isfinite(x)) throw std::domain_error("kde: non-finite sample value");
  }
  const double h = bandwidth.value_or(silverman_bandwidth(sample));
  if (!(h > 0.0) || !std::isfinite(h)) throw std::domain_error("kde: bandwidth must be positive");
  LatentDistribution d(Family::kKde, h, 0.0);
  d.kde_ = std::make_shared<const KdeModel>(std::move(sample), h, std::move(sample_path));
  d.compute_moments();
  return d;
}

LatentDistribution LatentDistribution::degenerate() {
  LatentDistribution d(Family::kDegenerate, 0.0, 0.0);
  d.mean_ = 0.0;
  d.second_moment_ = 0.0;
  return d;
}

double LatentDistribution::mode() const {
  if (family_ != Family::kTriangular) throw std::logic_error("mode: not a triangular latent");
  return p1_;
}

double LatentDistribution::sigma2() const {
  if (family_ != Family::kTruncatedNormal) throw std::logic_error("sigma2: not a truncated normal latent");
  return p1_;
}

double LatentDistribution::alpha() const {
  if (family_ != Family::kShiftedBeta) throw std::logic_error("alpha: not a shifted Beta latent");
  return p1_;
}

double LatentDistribution::beta() const {
  if (family_ != Family::kShiftedBeta) throw std::logic_error("beta: not a shifted Beta latent");
  return p2_;
}

double LatentDistribution::bandwidth() const {
  if (family_ != Family::kKde) throw std::logic_error("bandwidth: not a KDE latent");
  return kde_->bandwidth();
}

std::size_t LatentDistribution::kde_sample_size() const {
  return family_ == Family::kKde ? kde_->sample().size() : 0;
}

const std::string& LatentDistribution::sample_path() const {
  static const std::string empty;
  return family_ == Family::kKde ? kde_->path() : empty;
}

double LatentDistribution::quantile(double t) const {
  check_probability(t);
  switch (family_) {
    case Family::kUniform: return 2.0 * t - 1.0;
    case Family::kTriangular: return triangular_quantile(p1_, t);
    case Family::kInvertedTriangular:
      return t <= 0.5 ? -std::sqrt(1.0 - 2.0 * t) : std::sqrt(2.0 * t - 1.0);
    case Family::kTruncatedNormal: return truncated_normal_quantile(p1_, t);
    case Family::kShiftedBeta: return 2.0 * special::incomplete_beta_inverse(p1_, p2_, t) - 1.0;
    case Family::kKde: return kde_->quantile(t);
    case Family::kDegenerate: return 0.0;
  }
  return 0.0;
}

double LatentDistribution::cdf(double u) const {
  if (family_ == Family::kDegenerate) return u >= 0.0 ? 1.0 : 0.0;
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  switch (family_) {
    case Family::kUniform: return 0.5 * (u + 1.0);
    case Family::kTriangular: {
      const double m = p1_;
      if (u <= m) return (u + 1.0) * (u + 1.0) / (2.0 * (m + 1.0));
      return 1.0 - (1.0 - u) * (1.0 - u) / (2.0 * (1.0 - m));
    }
    case Family::kInvertedTriangular: return u < 0.0 ? 0.5 * (1.0 - u * u) : 0.5 * (1.0 + u * u);
    case Family::kTruncatedNormal: {
      const double sigma = std::sqrt(p1_);
      const double tail = special::normal_cdf(-1.0 / sigma);
      return (special::normal_cdf(u / sigma) - tail) / (1.0 - 2.0 * tail);
    }
    case Family::kShiftedBeta: return special::incomplete_beta(p1_, p2_, 0.5 * (u + 1.0));
    case Family::kKde: return kde_->cdf(u);
    case Family::kDegenerate: break;
  }
  return 0.0;
}

double LatentDistribution::density(double u) const {
  if (family_ == Family::kDegenerate) return 0.0;
  if (u < -1.0 || u > 1.0) return 0.0;
  switch (family_) {
    case Family::kUniform: return 0.5;
    case Family::kTriangular: {
      const double m = p1_;
      if (u <= m) return m > -1.0 ? (u + 1.0) / (m + 1.0) : 0.0;
      return m < 1.0 ? (1.0 - u) / (1.0 - m) : 0.0;
    }
    case Family::kInvertedTriangular: return std::fabs(u);
    case Family::kTruncatedNormal: {
      const double sigma = std::sqrt(p1_);
      const double tail = special::normal_cdf(-1.0 / sigma);
      return special::normal_pdf(u / sigma) / (sigma * (1.0 - 2.0 * tail));
    }
    case Family::kShiftedBeta: {
      const double w = 0.5 * (u + 1.0);
      if (w <= 0.0 || w >= 1.0) return 0.0;
      return 0.5 * std::exp((p1_ - 1.0) * std::log(w) + (p2_ - 1.0) * std::log1p(-w) -
                            special::log_beta(p1_, p2_));
    }
    case Family::kKde: return kde_->density(u);
    case Family::kDegenerate: break;
  }
  return 0.0;
}

double LatentDistribution::variance() const {
  return std::max(0.0, second_moment_ - mean_ * mean_);
}

std::vector<double> LatentDistribution::breakpoints() const {
  switch (family_) {
    case Family::kTriangular: {
      const double split = 0.5 * (p1_ + 1.0);
      if (split > 0.0 && split < 1.0) return {split};
      return {};
    }
    case Family::kInvertedTriangular: return {0.5};
    default: return {};
  }
}

bool LatentDistribution::is_symmetric() const {
  switch (family_) {
    case Family::kUniform:
    case Family::kInvertedTriangular:
    case Family::kTruncatedNormal:
    case Family::kDegenerate: return true;
    case Family::kTriangular: return p1_ == 0.0;
    case Family::kShiftedBeta: return p1_ == p2_;
    case Family::kKde: return false;
  }
  return false;
}

std::string LatentDistribution::describe() const {
  std::string out(family_name(family_));
  switch (family_) {
    case Family::kTriangular: out += "(m=" + format_number(p1_) + ")"; break;
    case Family::kTruncatedNormal: out += "(sigma2=" + format_number(p1_) + ")"; break;
    case Family::kShiftedBeta:
      out += "(alpha=" + format_number(p1_) + ", beta=" + format_number(p2_) + ")";
      break;
    case Family::kKde:
      out += "(n=" + std::to_string(kde_->sample().size()) + ", h=" + format_number(kde_->bandwidth()) + ")";
      break;
    default: break;
  }
  return out;
}

void LatentDistribution::compute_moments() {
  switch (family_) {
    case Family::kUniform:
      mean_ = 0.0;
      second_moment_ = 1.0 / 3.0;
      break;
    case Family::kTriangular:
      mean_ = p1_ / 3.0;
      second_moment_ = (p1_ * p1_ + 1.0) / 6.0;
      break;
    case Family::kInvertedTriangular:
      mean_ = 0.0;
      second_moment_ = 0.5;
      break;
    case Family::kTruncatedNormal: {
      const double sigma = std::sqrt(p1_);
      const double a = 1.0 / sigma;
      const double z = 2.0 * special::normal_cdf(a) - 1.0;
      mean_ = 0.0;
      second_moment_ = p1_ * (1.0 - 2.0 * a * special::normal_pdf(a) / z);
      break;
    }
    case Family::kShiftedBeta: {
      const double a = p1_;
      const double b = p2_;
      const double ew = a / (a + b);
      const double ew2 = a * (a + 1.0) / ((a + b) * (a + b + 1.0));
      mean_ = 2.0 * ew - 1.0;
      second_moment_ = 4.0 * ew2 - 4.0 * ew + 1.0;
      break;
    }
    case Family::kKde: {
      const auto model = kde_;
      mean_ = quadrature::adaptive([&](double t) { return model->quantile(t); }, 0.0, 1.0, {}, kMomentTol);
      second_moment_ = quadrature::adaptive(
          [&](double t) {
            const double q = model->quantile(t);
            return q * q;
          },
          0.0, 1.0, {}, kMomentTol);
      break;
    }
    case Family::kDegenerate:
      mean_ = 0.0;
      second_moment_ = 0.0;
      break;
  }
}

bool operator==(const LatentDistribution& a, const LatentDistribution& b) {
  if (a.family_ != b.family_) return false;
  if (a.family_ == Family::kKde) {
    return a.kde_ == b.kde_ ||
           (a.kde_->bandwidth() == b.kde_->bandwidth() && a.kde_->sample() == b.kde_->sample());
  }
  return a.p1_ == b.p1_ && a.p2_ == b.p2_;
}

double quantile(const LatentDistribution& dist, double t) { return dist.quantile(t); }

Moments moments(const LatentDistribution& dist) { return dist.moments(); }

double cross_moment(const LatentDistribution& d1, const LatentDistribution& d2) {
  if (d1.is_degenerate() || d2.is_degenerate()) return 0.0;
  if (d1 == d2) return d1.second_moment();
  const auto is = [](const LatentDistribution& d, Family f) { return d.family() == f; };
  const LatentDistribution* first = &d1;
  const LatentDistribution* second = &d2;
  if (static_cast<int>(first->family()) > static_cast<int>(second->family())) std::swap(first, second);
  if (is(*first, Family::kUniform) && is(*second, Family::kTriangular)) {
    const double m = second->mode();
    return (7.0 + m * m) / 30.0;
  }
  if (is(*first, Family::kUniform) && is(*second, Family::kInvertedTriangular)) return 0.4;
  if (is(*first, Family::kTriangular) && is(*second, Family::kInvertedTriangular) && first->mode() == 0.0) {
    return 2.0 / 3.0 - std::numbers::pi / 8.0;
  }
  return cross_moment_quadrature(d1, d2);
}

double cross_moment_quadrature(const LatentDistribution& d1, const LatentDistribution& d2, double tol) {
  auto breaks = d1.breakpoints();
  const auto more = d2.breakpoints();
  breaks.insert(breaks.end(), more.begin(), more.end());
  return quadrature::adaptive([&](double t) { return d1.quantile(t) * d2.quantile(t); }, 0.0, 1.0,
                              breaks, tol);
}

double quantile_correlation(const LatentDistribution& d1, const LatentDistribution& d2) {
  const double v1 = d1.variance();
  const double v2 = d2.variance();
  if (!(v1 > 0.0) || !(v2 > 0.0)) throw std::domain_error("zero-variance latent");
  if (d1 == d2) return 1.0;
  return (cross_moment(d1, d2) - d1.mean() * d2.mean()) / std::sqrt(v1 * v2);
}

double microdata_quantile(double c, double r, const LatentDistribution& dist, double t) {
  if (!(r >= 0.0)) throw std::domain_error("microdata_quantile: range must be >= 0");
  check_probability(t);
  if (r == 0.0) return c;
  return c + 0.5 * r * dist.quantile(t);
}

double silverman_bandwidth(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::domain_error("silverman_bandwidth: need at least two values");
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto at = [&](double p) {
    const double pos = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = at(0.75) - at(0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) throw std::domain_error("silverman_bandwidth: constant sample");
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

}  // namespace isda
