#include "isda/mallows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "isda/quadrature.hpp"

namespace isda {

namespace {

double clamp_residue(double d2) { return d2 < 0.0 ? 0.0 : d2; }

void require_same_dimension(const Box& b1, const Box& b2) {
  if (b1.dimension() != b2.dimension() || b1.latents.size() != b1.dimension() ||
      b2.latents.size() != b2.dimension()) {
    throw std::invalid_argument("box distance: dimension mismatch");
  }
}

}  // namespace

MomentSummary MomentSummary::from_latents(std::span<const LatentDistribution> latents) {
  const std::size_t p = latents.size();
  MomentSummary s;
  s.psi.resize(p);
  s.delta.resize(p);
  s.euu = Matrix(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    s.psi[i] = latents[i].mean();
    s.delta[i] = latents[i].second_moment() / 4.0;
    s.euu(i, i) = latents[i].second_moment();
    for (std::size_t j = 0; j < i; ++j) {
      const double e = cross_moment(latents[i], latents[j]);
      s.euu(i, j) = e;
      s.euu(j, i) = e;
    }
  }
  return s;
}

double dist_sq_general(const LatentInterval& x1, const LatentInterval& x2) {
  const double c1 = x1.interval.centre();
  const double c2 = x2.interval.centre();
  const double r1 = x1.interval.range();
  const double r2 = x2.interval.range();
  const double dc = c1 - c2;
  const double cross = (r1 > 0.0 && r2 > 0.0) ? cross_moment(x1.latent, x2.latent) : 0.0;
  const double d2 = dc * dc + 2.0 * dc * (0.5 * r1 * x1.latent.mean() - 0.5 * r2 * x2.latent.mean()) +
                    0.25 * r1 * r1 * x1.latent.second_moment() + 0.25 * r2 * r2 * x2.latent.second_moment() -
                    0.5 * r1 * r2 * cross;
  return clamp_residue(d2);
}

double dist_sq_musigma(const LatentInterval& x1, const LatentInterval& x2) {
  const double r1 = x1.interval.range();
  const double r2 = x2.interval.range();
  const double mu1 = x1.interval.centre() + 0.5 * r1 * x1.latent.mean();
  const double mu2 = x2.interval.centre() + 0.5 * r2 * x2.latent.mean();
  const double sigma1 = 0.5 * r1 * std::sqrt(x1.latent.variance());
  const double sigma2 = 0.5 * r2 * std::sqrt(x2.latent.variance());
  double d2 = (mu1 - mu2) * (mu1 - mu2) + (sigma1 - sigma2) * (sigma1 - sigma2);
  if (sigma1 > 0.0 && sigma2 > 0.0) {
    d2 += 2.0 * sigma1 * sigma2 * (1.0 - quantile_correlation(x1.latent, x2.latent));
  }
  return clamp_residue(d2);
}

double dist_sq_iid(const Interval& x1, const Interval& x2, const LatentDistribution& latent) {
  const double dc = x1.centre() - x2.centre();
  const double dr = x1.range() - x2.range();
  return clamp_residue(dc * dc + 0.25 * latent.second_moment() * dr * dr + latent.mean() * dc * dr);
}

double dist_sq_symmetric(const Interval& x1, const Interval& x2, double delta) {
  if (!(delta >= 0.0 && delta <= 0.25)) throw std::domain_error("dist_sq_symmetric: delta must lie in [0, 1/4]");
  const double dc = x1.centre() - x2.centre();
  const double dr = x1.range() - x2.range();
  return dc * dc + delta * dr * dr;
}

double dist_sq_box(const Box& b1, const Box& b2) {
  require_same_dimension(b1, b2);
  double sum = 0.0;
  for (std::size_t i = 0; i < b1.dimension(); ++i) {
    if (!(b1.latents[i] == b2.latents[i])) {
      throw std::invalid_argument("dist_sq_box: latents differ in dimension " + std::to_string(i) +
                                  "; use dist_sq_box_general");
    }
    sum += dist_sq_iid(b1.intervals[i], b2.intervals[i], b1.latents[i]);
  }
  return sum;
}

double dist_sq_box_general(const Box& b1, const Box& b2) {
  require_same_dimension(b1, b2);
  double sum = 0.0;
  for (std::size_t i = 0; i < b1.dimension(); ++i) {
    sum += dist_sq_general({b1.intervals[i], b1.latents[i]}, {b2.intervals[i], b2.latents[i]});
  }
  return sum;
}

MahalanobisForm mahalanobis_form(std::span<const LatentDistribution> latents) {
  const std::size_t p = latents.size();
  if (p == 0) throw std::invalid_argument("mahalanobis_form: need p >= 1");
  MahalanobisForm form;
  form.p = p;
  form.h = Matrix(2 * p, 2 * p);
  bool all_live = true;
  for (std::size_t i = 0; i < p; ++i) {
    const double psi = latents[i].mean();
    form.h(i, i) = 1.0;
    form.h(i, p + i) = 0.5 * psi;
    form.h(p + i, i) = 0.5 * psi;
    form.h(p + i, p + i) = 0.25 * latents[i].second_moment();
    if (latents[i].is_degenerate() || !(latents[i].variance() > 0.0)) all_live = false;
  }
  for (std::size_t i = 0; i < p; ++i) form.kept_indices.push_back(i);
  for (std::size_t i = 0; i < p; ++i) {
    if (!latents[i].is_degenerate()) form.kept_indices.push_back(p + i);
  }
  const std::size_t k = form.kept_indices.size();
  form.h_reduced = Matrix(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) form.h_reduced(a, b) = form.h(form.kept_indices[a], form.kept_indices[b]);
  }
  if (all_live) {
    form.q.resize(p);
    Matrix inv(2 * p, 2 * p);
    for (std::size_t i = 0; i < p; ++i) {
      const double psi = latents[i].mean();
      const double q = 4.0 / latents[i].variance();
      form.q[i] = q;
      inv(i, i) = 1.0 + 0.25 * psi * psi * q;
      inv(i, p + i) = -0.5 * psi * q;
      inv(p + i, i) = -0.5 * psi * q;
      inv(p + i, p + i) = q;
    }
    form.h_inverse = std::move(inv);
  }
  return form;
}

std::vector<double> stacked_centres_ranges(const Box& box) {
  auto y = box.centres();
  const auto r = box.ranges();
  y.insert(y.end(), r.begin(), r.end());
  return y;
}

double dist_sq_mahalanobis(std::span<const double> y1, std::span<const double> y2, const MahalanobisForm& form) {
  if (y1.size() != y2.size()) throw std::invalid_argument("dist_sq_mahalanobis: shape mismatch");
  std::vector<double> diff;
  if (y1.size() == 2 * form.p) {
    for (std::size_t idx : form.kept_indices) diff.push_back(y1[idx] - y2[idx]);
  } else if (y1.size() == form.kept_indices.size()) {
    for (std::size_t a = 0; a < y1.size(); ++a) diff.push_back(y1[a] - y2[a]);
  } else {
    throw std::invalid_argument("dist_sq_mahalanobis: shape mismatch");
  }
  return clamp_residue(quadratic_form(form.h_reduced, diff));
}

double oracle_dist_sq(const LatentInterval& x1, const LatentInterval& x2, int panels) {
  const double c1 = x1.interval.centre();
  const double c2 = x2.interval.centre();
  const double r1 = x1.interval.range();
  const double r2 = x2.interval.range();
  auto breaks = x1.latent.breakpoints();
  const auto more = x2.latent.breakpoints();
  breaks.insert(breaks.end(), more.begin(), more.end());
  return quadrature::graded_composite(
      [&](double t) {
        const double d = microdata_quantile(c1, r1, x1.latent, t) - microdata_quantile(c2, r2, x2.latent, t);
        return d * d;
      },
      panels, breaks);
}

std::vector<std::pair<double, double>> iso_distance_set(const Interval& x0, double delta, double radius,
                                                        int n_points) {
  if (!(delta > 0.0)) throw std::domain_error("iso_distance_set: delta must be > 0");
  if (!(radius > 0.0)) throw std::domain_error("iso_distance_set: radius must be > 0");
  if (n_points < 1) throw std::domain_error("iso_distance_set: n_points must be >= 1");
  const double c0 = x0.centre();
  const double r0 = x0.range();
  const double semi_r = radius / std::sqrt(delta);
  std::vector<std::pair<double, double>> points;
  points.reserve(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_points;
    const double c = c0 + radius * std::cos(theta);
    const double r = r0 + semi_r * std::sin(theta);
    if (r >= 0.0) points.emplace_back(c, r);
  }
  return points;
}

Matrix distance_matrix(const IntervalFrame& frame, unsigned threads, bool squared) {
  const std::size_t n = frame.rows();
  std::vector<Box> boxes;
  boxes.reserve(n);
  for (std::size_t r = 0; r < n; ++r) boxes.push_back(frame.row_box(r));
  Matrix out(n, n);
  const auto fill_row = [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d2 = dist_sq_box(boxes[i], boxes[j]);
      out(i, j) = squared ? d2 : std::sqrt(d2);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fill_row(i);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fill_row(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace isda
