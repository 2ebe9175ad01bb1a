// csv.hpp — metric tables: fixed 12-significant-digit, locale-free CSV

#pragma once

#include "ancilla/entanglement.hpp"
#include "ancilla/experiments.hpp"

#include <string>
#include <vector>

namespace ancilla::csv {

// Shortest general form with 12 significant digits; "nan"/"inf" spelled out.
std::string format_number(double x);

// Requested column names in canonical MetricSample order, "t" always first.
// Empty request selects every column. Unknown names throw ConfigError.
std::vector<std::string> select_columns(const std::vector<std::string>& requested);

// Lines starting with '#' carry provenance; the first non-comment line is
// the header.
std::string metric_table(const std::vector<MetricSample>& samples, const std::vector<std::string>& columns,
                         const std::vector<std::string>& comments);

// Reads a metric table written by metric_table. Columns missing from the
// file stay zero; unknown columns are ignored.
std::vector<MetricSample> parse_metric_table(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace ancilla::csv
