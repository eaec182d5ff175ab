#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isda/interval.hpp"
#include "isda/mallows.hpp"
#include "isda/matrix.hpp"

namespace isda {

struct Barycentre {
  Box box;
  double frechet_variance = 0.0;
};

/// Componentwise means of centres and ranges; the Fréchet variance is the
/// mean squared box distance of the rows to it. Throws on an empty frame.
Barycentre sample_barycentre(const IntervalFrame& frame);

/// Mean squared distance from the rows to an arbitrary box with the frame's
/// latents (the objective minimised by the barycentre).
double mean_sq_distance(const IntervalFrame& frame, const Box& to);

/// tr(S_CC + Delta S_RR + S_CR Psi) with divisor n.
double frechet_variance(const IntervalFrame& frame);
double frechet_variance(const IntervalFrame& frame, const MomentSummary& summary);

enum class CovarianceFormula {
  kGeneral,         // S_CC + 1/4 E o S_RR + 1/2 S_CR Psi + 1/2 Psi S_RC
  kIdentical,       // one latent for all variables
  kIdenticalCentred // one latent for all variables, E(U) = 0
};

std::string_view formula_name(CovarianceFormula formula);

struct CovarianceOptions {
  bool unbiased = false;                 // divisor n - 1 instead of n
  std::optional<MomentSummary> summary;  // overrides the frame's latents
};

struct SymbolicCovariance {
  Matrix sigma_b;
  Matrix sigma_cc;
  Matrix sigma_rr;
  Matrix sigma_cr;  // Cov(C_i, R_j); sigma_rc is its transpose
  MomentSummary summary;
  std::size_t divisor = 0;
  CovarianceFormula formula = CovarianceFormula::kGeneral;
  double min_eigenvalue = 0.0;
  std::vector<std::string> names;
};

/// Throws std::invalid_argument when n < 2.
SymbolicCovariance symbolic_covariance(const IntervalFrame& frame, const CovarianceOptions& options = {});

/// The general formula regardless of any shortcut; used to check the shortcuts.
Matrix symbolic_covariance_general(const Matrix& s_cc, const Matrix& s_rr, const Matrix& s_cr,
                                   const MomentSummary& summary);

/// D^{-1/2} S D^{-1/2}. Throws std::domain_error naming the first variable
/// with a non-positive variance (names optional).
Matrix correlation_from_cov(const Matrix& cov, const std::vector<std::string>& names = {});
Matrix correlation_from_cov(const SymbolicCovariance& cov);

/// (1/n) sum_k of the integral over (0, 1) of
/// (F_ki^{-1} - F_Bi^{-1})(F_kj^{-1} - F_Bj^{-1}), by direct quadrature.
double covariance_quantile_oracle(const IntervalFrame& frame, std::size_t i, std::size_t j, int panels = 256);

/// S_CC + Diag(S_RR + rbar rbar^T) / 24, divisor n.
Matrix cov_model7(const IntervalFrame& frame);

/// sqrt of the sum of squared entrywise differences.
double frobenius_diff(const Matrix& m1, const Matrix& m2);

/// Sample covariance of the columns of a and b (n x p each), given divisor.
Matrix cross_covariance(const Matrix& a, const Matrix& b, std::size_t divisor);

}  // namespace isda
