#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "isda/interval.hpp"
#include "isda/latent.hpp"
#include "isda/matrix.hpp"

namespace isda {

/// An interval together with the latent distribution of its microdata.
struct LatentInterval {
  Interval interval;
  LatentDistribution latent;
};

/// First and second latent moments of a p-dimensional box family.
///   psi[i]   = E(U_i)
///   delta[i] = E(U_i^2) / 4
///   euu      = cross-moment matrix, euu(i,i) = E(U_i^2), euu(i,j) = E(U_i, U_j)
struct MomentSummary {
  std::vector<double> psi;
  std::vector<double> delta;
  Matrix euu;

  [[nodiscard]] std::size_t dimension() const { return psi.size(); }

  /// Moments and pairwise cross-moments of the given latents.
  static MomentSummary from_latents(std::span<const LatentDistribution> latents);
};

// Squared Mallows distance between two intervals, moment form. Any latents.
double dist_sq_general(const LatentInterval& x1, const LatentInterval& x2);

// Same quantity through means, standard deviations and the quantile
// correlation of the two latents.
double dist_sq_musigma(const LatentInterval& x1, const LatentInterval& x2);

// Both intervals share one latent distribution.
double dist_sq_iid(const Interval& x1, const Interval& x2, const LatentDistribution& latent);

// Shared symmetric latent with delta = Var(U) / 4 in [0, 1/4].
double dist_sq_symmetric(const Interval& x1, const Interval& x2, double delta);

/// Squared distance between boxes whose latents coincide dimension by
/// dimension. Throws std::invalid_argument on a dimension or latent mismatch.
double dist_sq_box(const Box& b1, const Box& b2);

/// Sum of dist_sq_general over dimensions; latents may differ between boxes.
double dist_sq_box_general(const Box& b1, const Box& b2);

/// Mahalanobis representation of the box distance in (c, r) coordinates.
struct MahalanobisForm {
  std::size_t p = 0;
  Matrix h;                          // 2p x 2p, [[I, Psi/2], [Psi/2, Delta]]
  Matrix h_reduced;                  // rows/cols of kept_indices only
  std::optional<Matrix> h_inverse;   // closed block form; all latents non-degenerate
  std::vector<double> q;             // 4 / Var(U_i); empty unless h_inverse is set
  std::vector<std::size_t> kept_indices;  // into (c_1..c_p, r_1..r_p)
};

MahalanobisForm mahalanobis_form(std::span<const LatentDistribution> latents);

/// (c_1..c_p, r_1..r_p) of a box.
std::vector<double> stacked_centres_ranges(const Box& box);

/// (y1 - y2)^T H (y1 - y2). Accepts full 2p vectors or vectors already laid
/// out along kept_indices.
double dist_sq_mahalanobis(std::span<const double> y1, std::span<const double> y2,
                           const MahalanobisForm& form);

/// Direct quadrature of the integral of (F1^{-1} - F2^{-1})^2 over (0, 1).
/// Independent of the closed forms above; used to verify them.
double oracle_dist_sq(const LatentInterval& x1, const LatentInterval& x2, int panels = 256);

/// Points (c, r) on the ellipse (c - c0)^2 + delta (r - r0)^2 = radius^2,
/// sampled at n_points equally spaced angles; points with r < 0 are dropped.
std::vector<std::pair<double, double>> iso_distance_set(const Interval& x0, double delta, double radius,
                                                        int n_points);

/// n x n Mallows distance matrix (not squared unless `squared`) between the
/// rows of a frame. Entries are computed independently, so the result does
/// not depend on `threads`.
Matrix distance_matrix(const IntervalFrame& frame, unsigned threads = 1, bool squared = false);

}  // namespace isda
