#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "opto_spring/config.hpp"

namespace opto_spring {

using Cell = std::variant<double, bool, std::string>;

struct Column {
    std::string name;
    std::string unit;  // empty for dimensionless or flags
};

/// Tabular sweep output. Rows always have columns.size() cells.
struct SweepResult {
    std::string sweep;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> meta;
    int row_errors = 0;  // rows that hit a threshold/pole/domain error

    void add_row(std::vector<Cell> row);
    bool row_has_nan(std::size_t i) const;
};

SweepResult run_spectrum(const RunConfig& cfg);
SweepResult run_theta_sweep(const RunConfig& cfg);
SweepResult run_angle_compare(const RunConfig& cfg);
SweepResult run_stability_map(const RunConfig& cfg);
SweepResult run_sweep(const RunConfig& cfg);

struct WriteOptions {
    bool allow_nan = false;
    std::string timestamp;  // emitted as a header line when non-empty
};

/// Returns the number of rows skipped for containing NaN.
int write_csv(const SweepResult& r, std::ostream& os, const WriteOptions& opt = {});
int write_json(const SweepResult& r, std::ostream& os, const WriteOptions& opt = {});

/// 17 significant digits, enough to round-trip any double.
std::string format_number(double v);

}  // namespace opto_spring
