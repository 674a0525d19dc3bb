#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

#include "bcdbench/harness.hpp"

namespace bcd {

struct CsvData {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;
};

// Numeric CSV ingestion: rows are samples, one designated label column
// (-1 = last), remaining columns become the design matrix. With scaling on,
// the whole feature matrix is divided by its maximum absolute entry.
// Errors name the offending cell as (row, column), 1-based.
CsvData ingest_csv(const std::string& path, int label_column, bool scale_max_abs);

std::string format_g17(double v);  // 17 significant digits, round-trippable

// Header `epoch,solver,median_gap,q25,q75` (a monitor column is appended when
// the trace carries one); config echoed as #-prefixed comments; optional
// bound report appended as comments.
void write_trace_csv(std::ostream& out, const Trace& trace,
                     const std::vector<std::string>& config_comments,
                     const BoundReport* bounds = nullptr);

}  // namespace bcd
