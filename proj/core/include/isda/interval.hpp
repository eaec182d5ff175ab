#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isda/latent.hpp"
#include "isda/matrix.hpp"

namespace isda {

/// Closed bounded interval [lower, upper].
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  static Interval from_centre_range(double centre, double range) {
    return {centre - 0.5 * range, centre + 0.5 * range};
  }
  static Interval point(double x) { return {x, x}; }

  [[nodiscard]] double centre() const { return 0.5 * (lower + upper); }
  [[nodiscard]] double range() const { return upper - lower; }
  [[nodiscard]] bool contains(double x) const { return lower <= x && x <= upper; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A hyperrectangle together with the latent distribution of each dimension.
struct Box {
  std::vector<Interval> intervals;
  std::vector<LatentDistribution> latents;

  [[nodiscard]] std::size_t dimension() const { return intervals.size(); }
  [[nodiscard]] std::vector<double> centres() const;
  [[nodiscard]] std::vector<double> ranges() const;
};

enum class Rule {
  kNonFinite,                  // NaN or infinite bound
  kOrder,                      // upper < lower
  kMixedZeroRange,             // column has both zero and positive ranges
  kDegenerateLatentMismatch,   // zero-range column with a non-degenerate latent
  kDegenerateLatentOnPositive  // positive-range column with the degenerate latent
};

std::string_view rule_name(Rule rule);

struct Violation {
  static constexpr std::size_t kWholeColumn = std::numeric_limits<std::size_t>::max();

  std::size_t row = kWholeColumn;
  std::size_t column = 0;
  Rule rule = Rule::kOrder;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// n x p table of intervals with per-variable latent distributions. Shape is
/// checked at construction; content rules are reported by validate().
class IntervalFrame {
 public:
  IntervalFrame() = default;
  IntervalFrame(std::vector<std::string> names, std::vector<std::vector<Interval>> rows,
                std::vector<LatentDistribution> latents, std::vector<std::string> labels = {},
                std::vector<std::string> groups = {});

  [[nodiscard]] std::size_t rows() const { return n_rows_; }
  [[nodiscard]] std::size_t vars() const { return names_.size(); }
  [[nodiscard]] bool empty() const { return n_rows_ == 0; }

  [[nodiscard]] const Interval& at(std::size_t row, std::size_t var) const {
    return cells_[row * names_.size() + var];
  }
  [[nodiscard]] std::span<const Interval> row(std::size_t r) const {
    return {cells_.data() + r * names_.size(), names_.size()};
  }
  [[nodiscard]] Box row_box(std::size_t r) const;

  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] const std::vector<LatentDistribution>& latents() const { return latents_; }
  [[nodiscard]] const LatentDistribution& latent(std::size_t var) const { return latents_[var]; }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] const std::vector<std::string>& groups() const { return groups_; }

  /// Column index by name; throws std::out_of_range.
  [[nodiscard]] std::size_t index_of(std::string_view name) const;

  [[nodiscard]] IntervalFrame with_latents(std::vector<LatentDistribution> latents) const;
  /// Rows kept in the given order.
  [[nodiscard]] IntervalFrame select_rows(std::span<const std::size_t> keep) const;
  [[nodiscard]] IntervalFrame select_vars(std::span<const std::size_t> keep) const;

 private:
  std::vector<std::string> names_;
  std::size_t n_rows_ = 0;
  std::vector<Interval> cells_;
  std::vector<LatentDistribution> latents_;
  std::vector<std::string> labels_;
  std::vector<std::string> groups_;
};

struct CentresRanges {
  Matrix centres;
  Matrix ranges;
};

CentresRanges centres_ranges(const IntervalFrame& frame);

/// Every rule violation; empty iff the frame is valid.
std::vector<Violation> validate(const IntervalFrame& frame);

/// Drops rows holding a zero-range interval in any column that also has
/// positive ranges.
IntervalFrame drop_degenerate_rows(const IntervalFrame& frame);

/// Replaces the latent of every all-zero-range column by the degenerate one.
IntervalFrame assign_degenerate_latents(const IntervalFrame& frame);

}  // namespace isda
