#ifndef JSEARCH_REPORT_HPP
#define JSEARCH_REPORT_HPP

// Tabular reports written as CSV (header row, comma separated, '\n' line
// ends) or as a JSON array of flat objects. Every real is printed with 17
// significant digits, which round-trips binary64 exactly.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jsearch/errors.hpp"
#include "jsearch/validation.hpp"

namespace jsearch::report {

using Cell = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw DomainError("row width does not match header");
    rows.push_back(std::move(row));
  }
};

enum class Format { csv, json };

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

namespace detail {
inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

inline std::string json_value(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return json_string(*s);
  if (const auto* d = std::get_if<double>(&c)) {
    // JSON has no literal for non-finite numbers.
    if (!std::isfinite(*d)) return "null";
  }
  return format_cell(c);
}
}  // namespace detail

inline void write_json(std::ostream& os, const Table& t) {
  os << "[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n " : "\n ") << "{";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      os << (i ? ", " : "") << detail::json_string(t.columns[i]) << ": "
         << detail::json_value(t.rows[r][i]);
    }
    os << "}";
  }
  os << (t.rows.empty() ? "]\n" : "\n]\n");
}

inline std::string render(const Table& t, Format f) {
  std::ostringstream os;
  if (f == Format::csv) {
    write_csv(os, t);
  } else {
    write_json(os, t);
  }
  return os.str();
}

/// Parsed CSV: header plus raw string fields.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline CsvData read_csv(std::string_view text) {
  CsvData out;
  bool first = true;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (first) {
      out.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != out.header.size()) throw DomainError("ragged CSV row");
      out.rows.push_back(std::move(fields));
    }
  }
  return out;
}

inline double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw DomainError("not a number: '" + s + "'");
  return v;
}

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{
      "n",   "k",     "N",         "gamma_star", "t_run",        "p_at_trun",   "t_peak",
      "p_peak", "gap", "gap_ratio", "phase",     "s_overlap_sq", "w_overlap_sq"};
  return cols;
}

inline Table sweep_table(const std::vector<SweepRow>& rows) {
  Table t{sweep_columns(), {}};
  for (const auto& r : rows) {
    t.add_row({r.n, static_cast<std::int64_t>(r.k), r.N, r.gamma_star, r.t_run, r.p_at_trun,
               r.t_peak, r.p_peak, r.gap, r.gap_ratio, r.phase, r.s_overlap_sq, r.w_overlap_sq});
  }
  return t;
}

/// Inverse of sweep_table for CSV text.
inline std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
  const auto csv = read_csv(text);
  if (csv.header != sweep_columns()) throw DomainError("unexpected sweep CSV header");
  std::vector<SweepRow> out;
  for (const auto& f : csv.rows) {
    SweepRow r;
    r.n = std::stoll(f[0]);
    r.k = std::stoi(f[1]);
    r.N = std::stoull(f[2]);
    r.gamma_star = parse_real(f[3]);
    r.t_run = parse_real(f[4]);
    r.p_at_trun = parse_real(f[5]);
    r.t_peak = parse_real(f[6]);
    r.p_peak = parse_real(f[7]);
    r.gap = parse_real(f[8]);
    r.gap_ratio = parse_real(f[9]);
    r.phase = parse_real(f[10]);
    r.s_overlap_sq = parse_real(f[11]);
    r.w_overlap_sq = parse_real(f[12]);
    out.push_back(r);
  }
  return out;
}

/// One row per check. The instance is given as separate n and k columns so
/// that no field contains a comma.
inline Table validation_table(const GraphParams& params, const std::vector<ValidationReport>& reports) {
  Table t{{"n", "k", "check", "passed", "residual", "tolerance"}, {}};
  for (const auto& rep : reports) {
    for (const auto& c : rep.checks) {
      t.add_row({params.n(), static_cast<std::int64_t>(params.k()), c.name, c.passed, c.residual,
                 c.tolerance});
    }
  }
  return t;
}

}  // namespace jsearch::report

#endif  // JSEARCH_REPORT_HPP
