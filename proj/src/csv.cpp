#include "bcdbench/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bcd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, long row, long col) {
  const std::string_view t = trim(cell);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw std::invalid_argument("csv: non-numeric cell \"" + std::string(t) + "\" at (" +
                                std::to_string(row) + "," + std::to_string(col) + ")");
  return value;
}

}  // namespace

CsvData ingest_csv(const std::string& path, int label_column, bool scale_max_abs) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    size_t start = 0;
    long col = 1;
    for (;;) {
      const size_t comma = line.find(',', start);
      const std::string_view cell(line.data() + start,
                                  (comma == std::string::npos ? line.size() : comma) - start);
      row.push_back(parse_cell(cell, line_no, col));
      if (comma == std::string::npos) break;
      start = comma + 1;
      ++col;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("csv: row " + std::to_string(line_no) + " has " +
                                  std::to_string(row.size()) + " cells, expected " +
                                  std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("csv: empty file " + path);

  const int total_cols = static_cast<int>(rows.front().size());
  const int label = label_column < 0 ? total_cols - 1 : label_column;
  if (label >= total_cols)
    throw std::invalid_argument("csv: label column " + std::to_string(label) +
                                " out of range, file has " + std::to_string(total_cols) +
                                " columns");
  if (total_cols < 2) throw std::invalid_argument("csv: need at least one feature column");

  CsvData data;
  const auto m = static_cast<Eigen::Index>(rows.size());
  data.features.resize(m, total_cols - 1);
  data.labels.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    int out = 0;
    for (int j = 0; j < total_cols; ++j) {
      const double v = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (j == label)
        data.labels[i] = v;
      else
        data.features(i, out++) = v;
    }
  }
  if (scale_max_abs) {
    const double max_abs = data.features.cwiseAbs().maxCoeff();
    if (max_abs > 0) data.features /= max_abs;
  }
  return data;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const Trace& trace,
                     const std::vector<std::string>& config_comments, const BoundReport* bounds) {
  for (const auto& c : config_comments) out << "# " << c << "\n";
  out << "# f_star=" << format_g17(trace.f_star) << "\n";
  out << "# note: partial epochs at run end are dropped\n";
  const bool monitor = !trace.monitor_median.empty();
  out << "epoch,solver,median_gap,q25,q75" << (monitor ? ",monitor_median" : "") << "\n";
  for (size_t e = 0; e < trace.epoch.size(); ++e) {
    out << trace.epoch[e] << ',' << trace.solver << ',' << format_g17(trace.median[e]) << ','
        << format_g17(trace.q25[e]) << ',' << format_g17(trace.q75[e]);
    if (monitor) out << ',' << format_g17(trace.monitor_median[e]);
    out << "\n";
  }
  if (bounds) {
    out << "# bound_check: " << (bounds->all_ok ? "ok" : "violated") << "\n";
    for (const auto& c : bounds->checks)
      out << "# bound k=" << c.k << " mean_gap=" << format_g17(c.mean_gap)
          << " bound=" << format_g17(c.bound) << " stderr=" << format_g17(c.stderr_mean) << " "
          << (c.ok ? "ok" : "violated") << "\n";
  }
}

}  // namespace bcd
