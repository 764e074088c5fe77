#include "robgev/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "robgev/error.hpp"

namespace robgev {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      cell += c;
    } else if (c == delim && !quoted) {
      out.emplace_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  out.emplace_back(trim(cell));
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> parse_year(std::string_view s) {
  s = trim(s);
  int y = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), y);
  if (ec == std::errc() && ptr == s.data() + s.size()) return y;
  // Dates such as 1975-10-01: keep the leading year.
  if (ec == std::errc() && ptr != s.data() && *ptr == '-' && ptr - s.data() == 4) return y;
  return std::nullopt;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

char detect_delimiter(const std::string& line) {
  constexpr std::array<char, 3> candidates{',', '\t', ';'};
  char best = ',';
  std::ptrdiff_t best_count = 0;
  for (char c : candidates) {
    const auto n = std::count(line.begin(), line.end(), c);
    if (n > best_count) {
      best = c;
      best_count = n;
    }
  }
  return best;
}

std::size_t resolve(const ColumnRef& ref, const std::vector<std::string>& header,
                    std::size_t width, const char* what) {
  if (const auto* idx = std::get_if<std::size_t>(&ref)) {
    if (*idx >= width) {
      throw Error(ErrorKind::NoNumericColumn, std::string(what) + " column index " +
                                                  std::to_string(*idx) + " out of range (" +
                                                  std::to_string(width) + " columns)");
    }
    return *idx;
  }
  const std::string want = lower(std::get<std::string>(ref));
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (lower(header[i]) == want) return i;
  }
  // A purely numeric name is accepted as an index when no header matches.
  if (const auto n = parse_year(want); n && *n >= 0 && static_cast<std::size_t>(*n) < width) {
    return static_cast<std::size_t>(*n);
  }
  throw Error(ErrorKind::NoNumericColumn,
              std::string(what) + " column '" + std::get<std::string>(ref) + "' not found");
}

}  // namespace

StationSeries parse_series(std::istream& in, const ParseOptions& options, const std::string& source) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lines.empty() && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    lines.push_back(std::move(line));
  }
  if (lines.empty()) throw Error(ErrorKind::EmptySeries, source + ": no data rows");

  const char delim = options.delimiter != '\0' ? options.delimiter : detect_delimiter(lines.front());
  std::vector<std::string> header;
  std::size_t first = 0;
  if (options.header) {
    header = split(lines.front(), delim);
    first = 1;
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t width = header.size();
  for (std::size_t i = first; i < lines.size(); ++i) {
    rows.push_back(split(lines[i], delim));
    width = std::max(width, rows.back().size());
  }

  StationSeries series;
  series.source_path = source;
  series.row_count = rows.size();
  if (rows.empty()) throw Error(ErrorKind::EmptySeries, source + ": header only, no data rows");

  std::optional<std::size_t> year_col;
  if (options.year_column) {
    year_col = resolve(*options.year_column, header, width, "year");
  } else {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(header[i]) == "year") year_col = i;
    }
  }

  std::size_t value_col = 0;
  if (options.value_column) {
    value_col = resolve(*options.value_column, header, width, "value");
  } else {
    bool found = false;
    for (std::size_t c = 0; c < width && !found; ++c) {
      if (year_col && c == *year_col) continue;
      std::size_t numeric = 0;
      for (const auto& r : rows) {
        if (c < r.size() && parse_number(r[c])) ++numeric;
      }
      if (2 * numeric > rows.size()) {
        value_col = c;
        found = true;
      }
    }
    if (!found) throw Error(ErrorKind::NoNumericColumn, source + ": no numeric value column");
  }

  std::vector<int> years;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::size_t line_no = i + first + 1;
    const auto v = value_col < r.size() ? parse_number(r[value_col]) : std::nullopt;
    if (!v) {
      const std::string cell = value_col < r.size() ? r[value_col] : "";
      std::string where = "row " + std::to_string(line_no);
      if (year_col && *year_col < r.size() && !r[*year_col].empty()) where += " (year " + r[*year_col] + ")";
      series.diagnostics.push_back(where + ": " +
                                   (cell.empty() ? "missing value" : "non-numeric value '" + cell + "'") +
                                   ", dropped");
      continue;
    }
    std::optional<int> y;
    if (year_col) {
      y = *year_col < r.size() ? parse_year(r[*year_col]) : std::nullopt;
      if (!y) {
        series.diagnostics.push_back("row " + std::to_string(line_no) + ": unreadable year, dropped");
        continue;
      }
    }
    if (options.drop_below && *v < *options.drop_below) {
      series.diagnostics.push_back("row " + std::to_string(line_no) + ": value " + r[value_col] +
                                   " below threshold, dropped");
      continue;
    }
    series.values.push_back(*v);
    if (y) years.push_back(*y);
  }

  if (series.values.empty()) {
    throw Error(ErrorKind::EmptySeries, source + ": no usable values in column " + std::to_string(value_col));
  }
  if (year_col) {
    if (std::adjacent_find(years.begin(), years.end(), std::greater_equal<>()) == years.end()) {
      series.years = std::move(years);
    } else {
      series.diagnostics.push_back("years not strictly increasing, year column ignored");
    }
  }
  if (series.values.size() < 10) {
    series.diagnostics.push_back("only " + std::to_string(series.values.size()) +
                                 " values; at least 10 are needed for a reliable fit");
  } else if (series.values.size() < 30) {
    series.diagnostics.push_back("short series (" + std::to_string(series.values.size()) + " values)");
  }
  series.station_id = options.station_id;
  return series;
}

StationSeries load_series(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) {
    throw Error(ErrorKind::FileUnreadable, "cannot read '" + path + "'");
  }
  StationSeries s = parse_series(in, options, path);
  if (s.station_id.empty()) s.station_id = std::filesystem::path(path).stem().string();
  return s;
}

void write_series(std::ostream& out, const StationSeries& series) {
  const bool with_years = series.years.has_value();
  out << (with_years ? "year,value\n" : "value\n");
  std::array<char, 64> buf{};
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    if (with_years) out << (*series.years)[i] << ',';
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), series.values[i]);
    out.write(buf.data(), ptr - buf.data());
    out << '\n';
  }
}

void write_series(const std::string& path, const StationSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::FileUnreadable, "cannot write '" + path + "'");
  write_series(out, series);
}

}  // namespace robgev
