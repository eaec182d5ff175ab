#include "isda/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "isda/quadrature.hpp"

namespace isda {

namespace {

void require_rows(const IntervalFrame& frame, std::size_t min_rows, const char* what) {
  if (frame.rows() < min_rows) {
    throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(min_rows) + " row" +
                                (min_rows == 1 ? "" : "s"));
  }
}

std::vector<double> column_means(const Matrix& m) {
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j);
    out[j] = s / static_cast<double>(m.rows());
  }
  return out;
}

bool summary_is_identical(const MomentSummary& s) {
  const std::size_t p = s.dimension();
  for (std::size_t i = 0; i < p; ++i) {
    if (s.psi[i] != s.psi[0]) return false;
    for (std::size_t j = 0; j < p; ++j) {
      if (s.euu(i, j) != s.euu(0, 0)) return false;
    }
  }
  return true;
}

}  // namespace

Matrix cross_covariance(const Matrix& a, const Matrix& b, std::size_t divisor) {
  if (a.rows() != b.rows()) throw std::invalid_argument("cross_covariance: row mismatch");
  if (divisor == 0) throw std::invalid_argument("cross_covariance: zero divisor");
  const auto ma = column_means(a);
  const auto mb = column_means(b);
  Matrix out(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += (a(k, i) - ma[i]) * (b(k, j) - mb[j]);
      out(i, j) = s / static_cast<double>(divisor);
    }
  }
  return out;
}

Barycentre sample_barycentre(const IntervalFrame& frame) {
  require_rows(frame, 1, "sample_barycentre");
  const auto cr = centres_ranges(frame);
  const auto c = column_means(cr.centres);
  const auto r = column_means(cr.ranges);
  Barycentre out;
  out.box.latents = frame.latents();
  for (std::size_t v = 0; v < frame.vars(); ++v) {
    const double range = frame.latent(v).is_degenerate() ? 0.0 : r[v];
    out.box.intervals.push_back(Interval::from_centre_range(c[v], range));
  }
  out.frechet_variance = mean_sq_distance(frame, out.box);
  return out;
}

double mean_sq_distance(const IntervalFrame& frame, const Box& to) {
  require_rows(frame, 1, "mean_sq_distance");
  std::vector<double> d2(frame.rows());
  for (std::size_t k = 0; k < frame.rows(); ++k) d2[k] = dist_sq_box(frame.row_box(k), to);
  return quadrature::compensated_sum(d2) / static_cast<double>(frame.rows());
}

double frechet_variance(const IntervalFrame& frame) {
  return frechet_variance(frame, MomentSummary::from_latents(frame.latents()));
}

double frechet_variance(const IntervalFrame& frame, const MomentSummary& summary) {
  require_rows(frame, 1, "frechet_variance");
  if (summary.dimension() != frame.vars()) throw std::invalid_argument("frechet_variance: summary dimension");
  const auto cr = centres_ranges(frame);
  const auto s_cc = cross_covariance(cr.centres, cr.centres, frame.rows());
  const auto s_rr = cross_covariance(cr.ranges, cr.ranges, frame.rows());
  const auto s_cr = cross_covariance(cr.centres, cr.ranges, frame.rows());
  double tr = 0.0;
  for (std::size_t i = 0; i < frame.vars(); ++i) {
    tr += s_cc(i, i) + summary.delta[i] * s_rr(i, i) + s_cr(i, i) * summary.psi[i];
  }
  return tr;
}

std::string_view formula_name(CovarianceFormula formula) {
  switch (formula) {
    case CovarianceFormula::kGeneral: return "general";
    case CovarianceFormula::kIdentical: return "identical";
    case CovarianceFormula::kIdenticalCentred: return "identical-centred";
  }
  return "unknown";
}

Matrix symbolic_covariance_general(const Matrix& s_cc, const Matrix& s_rr, const Matrix& s_cr,
                                   const MomentSummary& summary) {
  const std::size_t p = s_cc.rows();
  Matrix out = s_cc + 0.25 * schur(summary.euu, s_rr);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      out(i, j) += 0.5 * s_cr(i, j) * summary.psi[j] + 0.5 * summary.psi[i] * s_cr(j, i);
    }
  }
  return out;
}

SymbolicCovariance symbolic_covariance(const IntervalFrame& frame, const CovarianceOptions& options) {
  require_rows(frame, 2, "symbolic_covariance");
  const std::size_t p = frame.vars();
  SymbolicCovariance out;
  out.names = frame.names();
  out.summary = options.summary ? *options.summary : MomentSummary::from_latents(frame.latents());
  if (out.summary.dimension() != p) throw std::invalid_argument("symbolic_covariance: summary dimension");
  out.divisor = options.unbiased ? frame.rows() - 1 : frame.rows();

  const auto cr = centres_ranges(frame);
  out.sigma_cc = cross_covariance(cr.centres, cr.centres, out.divisor);
  out.sigma_rr = cross_covariance(cr.ranges, cr.ranges, out.divisor);
  out.sigma_cr = cross_covariance(cr.centres, cr.ranges, out.divisor);

  if (summary_is_identical(out.summary)) {
    const double e2 = out.summary.euu(0, 0);
    const double eu = out.summary.psi[0];
    out.sigma_b = out.sigma_cc + (0.25 * e2) * out.sigma_rr;
    if (eu == 0.0) {
      out.formula = CovarianceFormula::kIdenticalCentred;
    } else {
      out.formula = CovarianceFormula::kIdentical;
      out.sigma_b += (0.5 * eu) * (out.sigma_cr + out.sigma_cr.transpose());
    }
  } else {
    out.formula = CovarianceFormula::kGeneral;
    out.sigma_b = symbolic_covariance_general(out.sigma_cc, out.sigma_rr, out.sigma_cr, out.summary);
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double avg = 0.5 * (out.sigma_b(i, j) + out.sigma_b(j, i));
      out.sigma_b(i, j) = avg;
      out.sigma_b(j, i) = avg;
    }
  }
  out.min_eigenvalue = jacobi_eigen(out.sigma_b).values.front();
  return out;
}

Matrix correlation_from_cov(const Matrix& cov, const std::vector<std::string>& names) {
  if (!cov.is_square()) throw std::invalid_argument("correlation_from_cov: matrix not square");
  const std::size_t p = cov.rows();
  std::vector<double> inv_sd(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (!(cov(i, i) > 0.0)) {
      const std::string who = i < names.size() ? "'" + names[i] + "'" : "#" + std::to_string(i);
      throw std::domain_error("zero-variance variable " + who);
    }
    inv_sd[i] = 1.0 / std::sqrt(cov(i, i));
  }
  Matrix out(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) out(i, j) = i == j ? 1.0 : cov(i, j) * inv_sd[i] * inv_sd[j];
  }
  return out;
}

Matrix correlation_from_cov(const SymbolicCovariance& cov) { return correlation_from_cov(cov.sigma_b, cov.names); }

double covariance_quantile_oracle(const IntervalFrame& frame, std::size_t i, std::size_t j, int panels) {
  require_rows(frame, 2, "covariance_quantile_oracle");
  if (i >= frame.vars() || j >= frame.vars()) throw std::out_of_range("covariance_quantile_oracle: variable index");
  const std::size_t n = frame.rows();
  const auto& li = frame.latent(i);
  const auto& lj = frame.latent(j);

  double ci = 0.0, ri = 0.0, cj = 0.0, rj = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ci += frame.at(k, i).centre();
    ri += frame.at(k, i).range();
    cj += frame.at(k, j).centre();
    rj += frame.at(k, j).range();
  }
  ci /= n;
  ri /= n;
  cj /= n;
  rj /= n;

  auto breaks = li.breakpoints();
  const auto more = lj.breakpoints();
  breaks.insert(breaks.end(), more.begin(), more.end());

  // one quantile evaluation per latent per node, shared by every row
  std::vector<double> terms(n);
  return quadrature::graded_composite(
      [&](double t) {
        const double qi = li.quantile(t);
        const double qj = lj.quantile(t);
        const double mi = ci + 0.5 * ri * qi;
        const double mj = cj + 0.5 * rj * qj;
        for (std::size_t k = 0; k < n; ++k) {
          const Interval xi = frame.at(k, i);
          const Interval xj = frame.at(k, j);
          terms[k] = (xi.centre() + 0.5 * xi.range() * qi - mi) * (xj.centre() + 0.5 * xj.range() * qj - mj);
        }
        return quadrature::compensated_sum(terms) / static_cast<double>(n);
      },
      panels, breaks);
}

Matrix cov_model7(const IntervalFrame& frame) {
  require_rows(frame, 2, "cov_model7");
  const auto cr = centres_ranges(frame);
  const std::size_t n = frame.rows();
  Matrix out = cross_covariance(cr.centres, cr.centres, n);
  const auto s_rr = cross_covariance(cr.ranges, cr.ranges, n);
  const auto rbar = column_means(cr.ranges);
  for (std::size_t i = 0; i < frame.vars(); ++i) out(i, i) += (s_rr(i, i) + rbar[i] * rbar[i]) / 24.0;
  return out;
}

double frobenius_diff(const Matrix& m1, const Matrix& m2) {
  if (m1.rows() != m2.rows() || m1.cols() != m2.cols()) throw std::invalid_argument("frobenius_diff: shape mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < m1.data().size(); ++k) {
    const double d = m1.data()[k] - m2.data()[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace isda
