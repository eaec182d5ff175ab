#include "isda/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isda {

std::vector<double> Box::centres() const {
  std::vector<double> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) out.push_back(iv.centre());
  return out;
}

std::vector<double> Box::ranges() const {
  std::vector<double> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) out.push_back(iv.range());
  return out;
}

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::kNonFinite: return "NonFinite";
    case Rule::kOrder: return "OrderViolation";
    case Rule::kMixedZeroRange: return "MixedZeroRange";
    case Rule::kDegenerateLatentMismatch: return "DegenerateLatentMismatch";
    case Rule::kDegenerateLatentOnPositive: return "DegenerateLatentOnPositiveRange";
  }
  return "Unknown";
}

IntervalFrame::IntervalFrame(std::vector<std::string> names, std::vector<std::vector<Interval>> rows,
                             std::vector<LatentDistribution> latents, std::vector<std::string> labels,
                             std::vector<std::string> groups)
    : names_(std::move(names)),
      n_rows_(rows.size()),
      latents_(std::move(latents)),
      labels_(std::move(labels)),
      groups_(std::move(groups)) {
  const std::size_t p = names_.size();
  if (p == 0) throw std::invalid_argument("IntervalFrame: need at least one variable");
  if (latents_.empty()) latents_.assign(p, LatentDistribution::uniform());
  if (latents_.size() != p) throw std::invalid_argument("IntervalFrame: one latent per variable required");
  if (!labels_.empty() && labels_.size() != n_rows_) {
    throw std::invalid_argument("IntervalFrame: label count does not match row count");
  }
  if (!groups_.empty() && groups_.size() != n_rows_) {
    throw std::invalid_argument("IntervalFrame: group count does not match row count");
  }
  cells_.reserve(n_rows_ * p);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != p) {
      throw std::invalid_argument("IntervalFrame: row " + std::to_string(r) + " has " +
                                  std::to_string(rows[r].size()) + " intervals, expected " + std::to_string(p));
    }
    cells_.insert(cells_.end(), rows[r].begin(), rows[r].end());
  }
}

Box IntervalFrame::row_box(std::size_t r) const {
  const auto cells = row(r);
  return Box{{cells.begin(), cells.end()}, latents_};
}

std::size_t IntervalFrame::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range("unknown variable '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

IntervalFrame IntervalFrame::with_latents(std::vector<LatentDistribution> latents) const {
  if (latents.size() != vars()) throw std::invalid_argument("with_latents: one latent per variable required");
  IntervalFrame out = *this;
  out.latents_ = std::move(latents);
  return out;
}

IntervalFrame IntervalFrame::select_rows(std::span<const std::size_t> keep) const {
  IntervalFrame out;
  out.names_ = names_;
  out.latents_ = latents_;
  out.n_rows_ = keep.size();
  out.cells_.reserve(keep.size() * vars());
  for (std::size_t r : keep) {
    if (r >= n_rows_) throw std::out_of_range("select_rows: row index out of range");
    const auto cells = row(r);
    out.cells_.insert(out.cells_.end(), cells.begin(), cells.end());
    if (!labels_.empty()) out.labels_.push_back(labels_[r]);
    if (!groups_.empty()) out.groups_.push_back(groups_[r]);
  }
  return out;
}

IntervalFrame IntervalFrame::select_vars(std::span<const std::size_t> keep) const {
  if (keep.empty()) throw std::invalid_argument("select_vars: need at least one variable");
  IntervalFrame out;
  out.n_rows_ = n_rows_;
  out.labels_ = labels_;
  out.groups_ = groups_;
  for (std::size_t v : keep) {
    if (v >= vars()) throw std::out_of_range("select_vars: variable index out of range");
    out.names_.push_back(names_[v]);
    out.latents_.push_back(latents_[v]);
  }
  out.cells_.reserve(n_rows_ * keep.size());
  for (std::size_t r = 0; r < n_rows_; ++r) {
    for (std::size_t v : keep) out.cells_.push_back(at(r, v));
  }
  return out;
}

CentresRanges centres_ranges(const IntervalFrame& frame) {
  CentresRanges out{Matrix(frame.rows(), frame.vars()), Matrix(frame.rows(), frame.vars())};
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    for (std::size_t v = 0; v < frame.vars(); ++v) {
      out.centres(r, v) = frame.at(r, v).centre();
      out.ranges(r, v) = frame.at(r, v).range();
    }
  }
  return out;
}

std::vector<Violation> validate(const IntervalFrame& frame) {
  std::vector<Violation> out;
  for (std::size_t v = 0; v < frame.vars(); ++v) {
    std::size_t zero = 0;
    std::size_t positive = 0;
    for (std::size_t r = 0; r < frame.rows(); ++r) {
      const Interval& iv = frame.at(r, v);
      if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper)) {
        out.push_back({r, v, Rule::kNonFinite});
        continue;
      }
      if (iv.upper < iv.lower) {
        out.push_back({r, v, Rule::kOrder});
        continue;
      }
      if (iv.range() == 0.0) ++zero; else ++positive;
    }
    if (zero > 0 && positive > 0) {
      out.push_back({Violation::kWholeColumn, v, Rule::kMixedZeroRange});
    } else if (zero > 0 && !frame.latent(v).is_degenerate()) {
      out.push_back({Violation::kWholeColumn, v, Rule::kDegenerateLatentMismatch});
    } else if (positive > 0 && frame.latent(v).is_degenerate()) {
      out.push_back({Violation::kWholeColumn, v, Rule::kDegenerateLatentOnPositive});
    }
  }
  return out;
}

IntervalFrame drop_degenerate_rows(const IntervalFrame& frame) {
  std::vector<bool> has_positive(frame.vars(), false);
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    for (std::size_t v = 0; v < frame.vars(); ++v) {
      if (frame.at(r, v).range() > 0.0) has_positive[v] = true;
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    bool drop = false;
    for (std::size_t v = 0; v < frame.vars() && !drop; ++v) {
      drop = has_positive[v] && frame.at(r, v).range() == 0.0;
    }
    if (!drop) keep.push_back(r);
  }
  return frame.select_rows(keep);
}

IntervalFrame assign_degenerate_latents(const IntervalFrame& frame) {
  auto latents = frame.latents();
  for (std::size_t v = 0; v < frame.vars(); ++v) {
    bool all_zero = frame.rows() > 0;
    for (std::size_t r = 0; r < frame.rows() && all_zero; ++r) all_zero = frame.at(r, v).range() == 0.0;
    if (all_zero) latents[v] = LatentDistribution::degenerate();
  }
  return frame.with_latents(std::move(latents));
}

}  // namespace isda
