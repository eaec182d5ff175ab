#include "isda/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace isda {

namespace {

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string trim_ws(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open '" + path + "'", {"cannot open '" + path + "'"});
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write '" + path + "'", {"cannot write '" + path + "'"});
  return out;
}

// Numbers compare numerically, everything else lexicographically.
bool key_part_less(const std::string& a, const std::string& b) {
  const auto na = parse_double(a);
  const auto nb = parse_double(b);
  if (na && nb) {
    if (*na != *nb) return *na < *nb;
    return a < b;
  }
  if (na != nb && (na || nb)) return static_cast<bool>(na);
  return a < b;
}

bool key_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), key_part_less);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        field += '"';
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(trim_ws(field));
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  out.push_back(trim_ws(field));
  return out;
}

std::string join_group(const std::vector<std::string>& group) {
  std::string out;
  for (std::size_t k = 0; k < group.size(); ++k) {
    if (k) out += '|';
    out += group[k];
  }
  return out;
}

AggregateResult aggregate(std::span<const MicroRecord> records, const AggregateOptions& options) {
  if (!(options.trim >= 0.0 && options.trim < 0.5)) throw std::invalid_argument("aggregate: trim must lie in [0, 0.5)");
  const bool keep_degenerate = options.keep_degenerate && options.trim == 0.0;

  std::vector<std::string> variables;
  std::map<std::string, std::size_t> var_index;
  auto cmp = [](const std::vector<std::string>& a, const std::vector<std::string>& b) { return key_less(a, b); };
  std::map<std::vector<std::string>, std::vector<std::vector<double>>, decltype(cmp)> cells(cmp);
  std::map<std::vector<std::string>, std::vector<std::size_t>, decltype(cmp)> non_finite(cmp);

  for (const auto& rec : records) {
    auto [it, fresh] = var_index.try_emplace(rec.variable, variables.size());
    if (fresh) variables.push_back(rec.variable);
    auto& row = cells[rec.group];
    if (row.size() < variables.size()) row.resize(variables.size());
    if (!std::isfinite(rec.value)) {
      auto& nf = non_finite[rec.group];
      nf.resize(variables.size());
      ++nf[it->second];
      continue;
    }
    row[it->second].push_back(rec.value);
  }
  const std::size_t p = variables.size();
  if (p == 0) throw std::invalid_argument("aggregate: no records");

  AggregateResult result;
  result.groups_seen = cells.size();
  result.scaled.variables = variables;
  result.scaled.values.resize(p);
  result.scaled.rows.resize(p);

  std::vector<std::vector<Interval>> rows;
  std::vector<std::string> labels;
  std::vector<std::string> groups;
  std::vector<std::vector<std::vector<double>>> kept_values;

  for (auto& [key, row] : cells) {
    row.resize(p);
    const std::string label = join_group(key);
    if (const auto nf = non_finite.find(key); nf != non_finite.end()) {
      for (std::size_t v = 0; v < nf->second.size(); ++v) {
        if (nf->second[v]) result.dropped.push_back({label, variables[v], "NonFinite", nf->second[v]});
      }
    }
    bool ok = true;
    std::vector<Interval> intervals(p);
    std::vector<std::vector<double>> retained(p);
    for (std::size_t v = 0; v < p; ++v) {
      auto& values = row[v];
      if (values.empty()) {
        result.dropped.push_back({label, variables[v], "MissingCell", 0});
        ok = false;
        continue;
      }
      std::sort(values.begin(), values.end());
      const auto n = values.size();
      const auto cut = static_cast<std::size_t>(std::floor(options.trim * static_cast<double>(n)));
      if (2 * cut >= n) {
        result.dropped.push_back({label, variables[v], "EmptyCell", n});
        ok = false;
        continue;
      }
      retained[v].assign(values.begin() + static_cast<std::ptrdiff_t>(cut),
                         values.end() - static_cast<std::ptrdiff_t>(cut));
      intervals[v] = {retained[v].front(), retained[v].back()};
      if (intervals[v].range() == 0.0 && !keep_degenerate) {
        result.dropped.push_back({label, variables[v], "DegenerateCell", retained[v].size()});
        ok = false;
      }
    }
    if (!ok) continue;
    rows.push_back(std::move(intervals));
    labels.push_back(label);
    groups.push_back(key.empty() ? std::string() : key.front());
    kept_values.push_back(std::move(retained));
  }

  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t v = 0; v < p; ++v) {
      if (rows[r][v].range() == 0.0) continue;
      const auto u = scale_to_latent(kept_values[r][v], rows[r][v]);
      result.scaled.values[v].insert(result.scaled.values[v].end(), u.begin(), u.end());
      result.scaled.rows[v].insert(result.scaled.rows[v].end(), u.size(), r);
    }
  }

  IntervalFrame frame(variables, std::move(rows), {}, std::move(labels), std::move(groups));
  result.frame = keep_degenerate ? assign_degenerate_latents(frame) : std::move(frame);
  return result;
}

std::vector<MicroRecord> read_microdata_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty microdata file", {"line 1: missing header"});
  const auto header = split_csv_line(line);
  const auto var_it = std::find(header.begin(), header.end(), "variable");
  const auto val_it = std::find(header.begin(), header.end(), "value");
  if (var_it == header.end() || val_it == header.end()) {
    throw IngestError("malformed microdata header", {"line 1: header needs 'variable' and 'value' columns"});
  }
  const auto var_col = static_cast<std::size_t>(var_it - header.begin());
  const auto val_col = static_cast<std::size_t>(val_it - header.begin());
  std::vector<std::size_t> group_cols;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k != var_col && k != val_col) group_cols.push_back(k);
  }
  if (group_cols.empty()) throw IngestError("malformed microdata header", {"line 1: no group column"});

  std::vector<MicroRecord> out;
  std::vector<std::string> issues;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_ws(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      issues.push_back("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
      continue;
    }
    MicroRecord rec;
    for (std::size_t k : group_cols) rec.group.push_back(fields[k]);
    rec.variable = fields[var_col];
    const auto v = parse_double(fields[val_col]);
    if (!v || !std::isfinite(*v)) {
      issues.push_back("line " + std::to_string(line_no) + ": value '" + fields[val_col] + "' is not a finite number");
      continue;
    }
    if (rec.variable.empty()) {
      issues.push_back("line " + std::to_string(line_no) + ": empty variable name");
      continue;
    }
    rec.value = *v;
    out.push_back(std::move(rec));
  }
  if (!issues.empty()) throw IngestError("invalid microdata", std::move(issues));
  return out;
}

std::vector<MicroRecord> load_microdata_csv(const std::string& path) {
  auto in = open_in(path);
  return read_microdata_csv(in);
}

IntervalFrame read_interval_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty interval file", {"line 1: missing header"});
  const auto header = split_csv_line(line);

  struct Column {
    std::string name;
    bool centre_range = false;
    std::optional<std::size_t> first, second;
  };
  std::vector<Column> vars;
  std::optional<std::size_t> label_col, group_col;
  std::vector<std::string> issues;

  auto find_var = [&](const std::string& name) -> Column& {
    for (auto& c : vars) {
      if (c.name == name) return c;
    }
    vars.emplace_back();
    vars.back().name = name;
    return vars.back();
  };
  for (std::size_t k = 0; k < header.size(); ++k) {
    const auto& h = header[k];
    if (h == "label") {
      label_col = k;
      continue;
    }
    if (h == "group") {
      group_col = k;
      continue;
    }
    const auto dot = h.rfind('.');
    const std::string suffix = dot == std::string::npos ? "" : h.substr(dot + 1);
    if (suffix != "lo" && suffix != "hi" && suffix != "c" && suffix != "r") {
      issues.push_back("line 1: column '" + h + "' is not <name>.lo/.hi/.c/.r, label or group");
      continue;
    }
    auto& col = find_var(h.substr(0, dot));
    const bool cr = suffix == "c" || suffix == "r";
    if ((col.first || col.second) && col.centre_range != cr) {
      issues.push_back("line 1: variable '" + col.name + "' mixes .lo/.hi with .c/.r");
      continue;
    }
    col.centre_range = cr;
    auto& slot = (suffix == "lo" || suffix == "c") ? col.first : col.second;
    if (slot) issues.push_back("line 1: duplicate column '" + h + "'");
    slot = k;
  }
  for (const auto& col : vars) {
    if (!col.first || !col.second) {
      const char* missing = col.centre_range ? (col.first ? ".r" : ".c") : (col.first ? ".hi" : ".lo");
      issues.push_back("line 1: variable '" + col.name + "' is missing its '" + col.name + missing + "' column");
    }
  }
  if (vars.empty() && issues.empty()) issues.push_back("line 1: no interval columns");
  if (!issues.empty()) throw IngestError("malformed interval header", std::move(issues));

  std::vector<std::vector<Interval>> rows;
  std::vector<std::string> labels, groups;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_ws(line).empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != header.size()) {
      issues.push_back(where + "expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
      continue;
    }
    std::vector<Interval> row;
    for (const auto& col : vars) {
      const auto a = parse_double(fields[*col.first]);
      const auto b = parse_double(fields[*col.second]);
      if (!a || !b || !std::isfinite(*a) || !std::isfinite(*b)) {
        issues.push_back(where + "variable '" + col.name + "' has a non-numeric or non-finite bound");
        row.push_back({});
        continue;
      }
      const Interval iv = col.centre_range ? Interval::from_centre_range(*a, *b) : Interval{*a, *b};
      if (col.centre_range ? *b < 0.0 : iv.upper < iv.lower) {
        issues.push_back(where + "variable '" + col.name + "' OrderViolation (upper < lower)");
      }
      row.push_back(iv);
    }
    rows.push_back(std::move(row));
    if (label_col) labels.push_back(fields[*label_col]);
    if (group_col) groups.push_back(fields[*group_col]);
  }
  if (!issues.empty()) throw IngestError("invalid interval data", std::move(issues));
  std::vector<std::string> names;
  for (const auto& col : vars) names.push_back(col.name);
  return IntervalFrame(std::move(names), std::move(rows), {}, std::move(labels), std::move(groups));
}

IntervalFrame load_interval_csv(const std::string& path) {
  auto in = open_in(path);
  return read_interval_csv(in);
}

void write_interval_csv(const IntervalFrame& frame, std::ostream& out, IntervalEncoding encoding) {
  const bool has_labels = !frame.labels().empty();
  const bool has_groups = !frame.groups().empty();
  const bool cr = encoding == IntervalEncoding::kCentreRange;
  std::vector<std::string> head;
  if (has_labels) head.emplace_back("label");
  if (has_groups) head.emplace_back("group");
  for (const auto& name : frame.names()) {
    head.push_back(quote_if_needed(name + (cr ? ".c" : ".lo")));
    head.push_back(quote_if_needed(name + (cr ? ".r" : ".hi")));
  }
  for (std::size_t k = 0; k < head.size(); ++k) out << (k ? "," : "") << head[k];
  out << '\n';
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    bool first = true;
    auto emit = [&](const std::string& s) {
      out << (first ? "" : ",") << s;
      first = false;
    };
    if (has_labels) emit(quote_if_needed(frame.labels()[r]));
    if (has_groups) emit(quote_if_needed(frame.groups()[r]));
    for (const auto& iv : frame.row(r)) {
      emit(format_double(cr ? iv.centre() : iv.lower));
      emit(format_double(cr ? iv.range() : iv.upper));
    }
    out << '\n';
  }
}

void save_interval_csv(const IntervalFrame& frame, const std::string& path, IntervalEncoding encoding) {
  auto out = open_out(path);
  write_interval_csv(frame, out, encoding);
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty summary file", {"line 1: missing header"});
  const auto header = split_csv_line(line);
  const std::vector<std::string> wanted{"group", "variable", "mean", "median", "min", "max"};
  std::vector<std::size_t> col(wanted.size());
  std::vector<std::string> issues;
  for (std::size_t w = 0; w < wanted.size(); ++w) {
    const auto it = std::find(header.begin(), header.end(), wanted[w]);
    if (it == header.end()) {
      issues.push_back("line 1: missing column '" + wanted[w] + "'");
    } else {
      col[w] = static_cast<std::size_t>(it - header.begin());
    }
  }
  if (!issues.empty()) throw IngestError("malformed summary header", std::move(issues));

  std::vector<SummaryRow> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_ws(line).empty()) continue;
    const auto f = split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (f.size() != header.size()) {
      issues.push_back(where + "expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(f.size()));
      continue;
    }
    SummaryRow row{f[col[0]], f[col[1]]};
    double* dest[] = {&row.mean, &row.median, &row.min, &row.max};
    bool ok = true;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto v = parse_double(f[col[k + 2]]);
      if (!v || !std::isfinite(*v)) {
        issues.push_back(where + "column '" + wanted[k + 2] + "' is not a finite number");
        ok = false;
      } else {
        *dest[k] = *v;
      }
    }
    if (ok && row.max < row.min) issues.push_back(where + "OrderViolation (max < min)");
    if (ok) out.push_back(std::move(row));
  }
  if (!issues.empty()) throw IngestError("invalid summary data", std::move(issues));
  return out;
}

std::vector<SummaryRow> load_summary_csv(const std::string& path) {
  auto in = open_in(path);
  return read_summary_csv(in);
}

void write_matrix_csv(const Matrix& m, const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels, std::ostream& out) {
  if (row_labels.size() != m.rows() || col_labels.size() != m.cols()) {
    throw std::invalid_argument("write_matrix_csv: label count mismatch");
  }
  out << "\"\"";
  for (const auto& c : col_labels) out << ',' << quote_if_needed(c);
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << quote_if_needed(row_labels[i]);
    for (std::size_t j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
    out << '\n';
  }
}

std::vector<double> load_sample_file(const std::string& path) {
  auto in = open_in(path);
  std::vector<double> out;
  std::vector<std::string> issues;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto field = split_csv_line(line).front();
    if (field.empty()) continue;
    const auto v = parse_double(field);
    if (!v) {
      if (line_no == 1) continue;  // header
      issues.push_back("line " + std::to_string(line_no) + ": '" + field + "' is not a number");
      continue;
    }
    out.push_back(*v);
  }
  if (!issues.empty()) throw IngestError("invalid sample file '" + path + "'", std::move(issues));
  return out;
}

void save_sample_file(std::span<const double> values, const std::string& path) {
  auto out = open_out(path);
  out << "u\n";
  for (double v : values) out << format_double(v) << '\n';
}

}  // namespace isda
