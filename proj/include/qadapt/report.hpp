#pragma once
#include <string>

namespace qadapt {

// Rendered views of a sweep's aggregate.csv: an aligned text table (one row
// per algorithm, grouped by base, best value per column starred) and a
// machine-readable CSV of the same rows. Consumes the seed-mean rows.
// Malformed input throws std::runtime_error mentioning the line number.
struct ReportTable {
    std::string text;
    std::string csv;
};

ReportTable render_report(const std::string& aggregate_csv);

}  // namespace qadapt
