#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "isda/estimation.hpp"
#include "isda/interval.hpp"
#include "isda/matrix.hpp"

namespace isda {

/// Input problems found while reading a file. Each issue is a one-line
/// message, prefixed with the line number where one applies.
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, std::vector<std::string> issues)
      : std::runtime_error(what), issues_(std::move(issues)) {}
  [[nodiscard]] const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct MicroRecord {
  std::vector<std::string> group;
  std::string variable;
  double value = 0.0;
};

struct AggregateOptions {
  double trim = 0.0;             // fraction dropped from each side, in [0, 0.5)
  bool keep_degenerate = false;  // honoured only when trim == 0
};

struct AggregateIssue {
  std::string group;     // joined key
  std::string variable;  // empty when it concerns the whole group
  std::string rule;      // DegenerateCell, MissingCell, EmptyCell, NonFinite
  std::size_t count = 0;
};

struct AggregateResult {
  IntervalFrame frame;
  ScaledSample scaled;
  std::vector<AggregateIssue> dropped;
  std::size_t groups_seen = 0;
};

/// One interval per (group, variable) cell: drops floor(trim n) values from
/// each end and takes [min, max] of the rest. A group with any missing,
/// emptied or zero-range cell is dropped whole and reported. Rows are sorted
/// by group key (numeric-aware); variables keep first-appearance order.
AggregateResult aggregate(std::span<const MicroRecord> records, const AggregateOptions& options = {});

/// Group key parts joined for display.
std::string join_group(const std::vector<std::string>& group);

/// Reads `group1[,group2,...],variable,value`.
std::vector<MicroRecord> read_microdata_csv(std::istream& in);
std::vector<MicroRecord> load_microdata_csv(const std::string& path);

/// Interval CSV with `<name>.lo,<name>.hi` or `<name>.c,<name>.r` pairs and
/// optional `label` / `group` columns. All latents default to uniform.
IntervalFrame read_interval_csv(std::istream& in);
IntervalFrame load_interval_csv(const std::string& path);

enum class IntervalEncoding { kLowerUpper, kCentreRange };

void write_interval_csv(const IntervalFrame& frame, std::ostream& out,
                        IntervalEncoding encoding = IntervalEncoding::kLowerUpper);
void save_interval_csv(const IntervalFrame& frame, const std::string& path,
                       IntervalEncoding encoding = IntervalEncoding::kLowerUpper);

/// Columns group,variable,mean,median,min,max (any order).
std::vector<SummaryRow> read_summary_csv(std::istream& in);
std::vector<SummaryRow> load_summary_csv(const std::string& path);

/// Header "", col_labels...; one row per row label; values at 17 digits.
void write_matrix_csv(const Matrix& m, const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels, std::ostream& out);

/// Numbers from a one-column file (optional non-numeric header line).
std::vector<double> load_sample_file(const std::string& path);
void save_sample_file(std::span<const double> values, const std::string& path);

/// Splits one CSV line; double quotes may wrap fields containing commas.
std::vector<std::string> split_csv_line(const std::string& line);

std::string format_double(double x);

}  // namespace isda
