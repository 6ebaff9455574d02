#include "tempered/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tempered/error.hpp"

namespace tempered {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one record; double quotes protect delimiters, "" is a literal quote.
std::vector<std::string> split_record(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delim) {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(trim(field));
  return out;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line, fields)
};

Table read_table(const std::string& path, char delim, bool has_header) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  Table t;
  std::string line;
  std::size_t line_no = 0;
  bool header_done = !has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!header_done) {
      t.header = split_record(line, delim);
      header_done = true;
      continue;
    }
    t.rows.emplace_back(line_no, split_record(line, delim));
  }
  if (has_header && !header_done) throw InputError("input file '" + path + "' is empty");
  return t;
}

std::size_t resolve_column(const Table& t, const std::string& column,
                           const std::string& path) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == column) return i;
  if (all_digits(column)) {
    const std::size_t idx = std::stoul(column);
    if (idx >= 1) return idx - 1;
  }
  std::ostringstream msg;
  msg << "column '" << column << "' not found in '" << path << "'";
  if (!t.header.empty()) {
    msg << " (header:";
    for (const auto& h : t.header) msg << " '" << h << "'";
    msg << ")";
  }
  throw InputError(msg.str());
}

}  // namespace

LoadReport load_csv(const std::string& path, const CsvOptions& options) {
  const Table t = read_table(path, options.delimiter, options.has_header);
  const std::size_t col = resolve_column(t, options.column, path);

  LoadReport report;
  std::vector<double> values;
  auto note = [&](std::size_t line, const std::string& what) {
    if (report.diagnostics.size() < 5)
      report.diagnostics.push_back("line " + std::to_string(line) + ": " + what);
  };
  for (const auto& [line, fields] : t.rows) {
    ++report.rows;
    double x = 0.0;
    if (col >= fields.size() || !parse_double(fields[col], x) || !std::isfinite(x)) {
      ++report.excluded_invalid;
      note(line, col >= fields.size() ? "missing field" : "not a number '" + fields[col] + "'");
      continue;
    }
    if (!(x > 0.0)) {
      ++report.excluded_nonpositive;
      note(line, "non-positive value " + fields[col]);
      continue;
    }
    values.push_back(x);
  }
  if (values.empty()) {
    std::ostringstream msg;
    msg << "no positive values in column '" << options.column << "' of '" << path << "' ("
        << report.rows << " rows, " << report.excluded_nonpositive << " non-positive, "
        << report.excluded_invalid << " invalid)";
    throw InputError(msg.str());
  }
  report.sample = Sample(std::move(values));
  return report;
}

void write_sample_csv(const std::string& path, const Sample& s,
                      const std::string& header) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << header << '\n';
  char buf[64];
  for (double x : s.values()) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf << '\n';
  }
}

std::chrono::sys_days parse_iso_date(const std::string& text) {
  using namespace std::chrono;
  const std::string t = trim(text);
  int y = 0;
  unsigned m = 1, d = 1;
  auto bad = [&] { return InputError("invalid date '" + text + "' (expected YYYY-MM-DD or YYYY)"); };
  if (t.size() == 4 && all_digits(t)) {
    y = std::stoi(t);
  } else if (t.size() == 10 && t[4] == '-' && t[7] == '-' && all_digits(t.substr(0, 4)) &&
             all_digits(t.substr(5, 2)) && all_digits(t.substr(8, 2))) {
    y = std::stoi(t.substr(0, 4));
    m = static_cast<unsigned>(std::stoi(t.substr(5, 2)));
    d = static_cast<unsigned>(std::stoi(t.substr(8, 2)));
  } else {
    throw bad();
  }
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) throw bad();
  return sys_days{ymd};
}

std::string format_iso_date(std::chrono::sys_days day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

DatedLoad load_dated_csv(const std::string& path, const CsvOptions& value_column,
                         const std::string& date_column) {
  const Table t = read_table(path, value_column.delimiter, value_column.has_header);
  const std::size_t vcol = resolve_column(t, value_column.column, path);
  const std::size_t dcol = resolve_column(t, date_column, path);
  DatedLoad out;
  for (const auto& [line, fields] : t.rows) {
    (void)line;
    double x = 0.0;
    if (vcol >= fields.size() || dcol >= fields.size() || !parse_double(fields[vcol], x) ||
        !std::isfinite(x) || !(x > 0.0)) {
      ++out.excluded;
      continue;
    }
    try {
      out.rows.push_back({parse_iso_date(fields[dcol]), x});
    } catch (const InputError&) {
      ++out.excluded;
    }
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const DatedValue& a, const DatedValue& b) { return a.date < b.date; });
  if (out.rows.empty()) throw InputError("no dated positive values in '" + path + "'");
  return out;
}

}  // namespace tempered
