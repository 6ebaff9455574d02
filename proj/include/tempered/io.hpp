#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "tempered/model.hpp"

namespace tempered {

struct CsvOptions {
  std::string column = "1";  // header name, or one-based index
  char delimiter = ',';
  bool has_header = true;
};

struct LoadReport {
  Sample sample;
  std::size_t rows = 0;
  std::size_t excluded_nonpositive = 0;
  std::size_t excluded_invalid = 0;
  std::vector<std::string> diagnostics;  // first few rejected rows
};

/// Reads one column of a delimited file; keeps strictly positive finite
/// values. Throws InputError when nothing usable remains.
LoadReport load_csv(const std::string& path, const CsvOptions& options);

/// Writes one value per line with a header, 17 significant digits.
void write_sample_csv(const std::string& path, const Sample& s,
                      const std::string& header = "value");

struct DatedValue {
  std::chrono::sys_days date;
  double value;
};

struct DatedLoad {
  std::vector<DatedValue> rows;  // chronological
  std::size_t excluded = 0;
};

/// ISO-8601 calendar date (YYYY-MM-DD, or YYYY meaning January 1).
std::chrono::sys_days parse_iso_date(const std::string& text);
std::string format_iso_date(std::chrono::sys_days day);

/// Reads (date, value) pairs, dropping rows with an unparsable date or a
/// non-positive value, sorted by date (stable).
DatedLoad load_dated_csv(const std::string& path, const CsvOptions& value_column,
                         const std::string& date_column);

}  // namespace tempered
