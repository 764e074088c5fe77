#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace robgev {

/// A column is addressed either by its 0-based index or by its header name.
using ColumnRef = std::variant<std::size_t, std::string>;

struct ParseOptions {
  /// Value column. When unset, the first column other than the year column
  /// whose cells are mostly numeric is used.
  std::optional<ColumnRef> value_column;
  /// Year column. When unset and the file has a header, a column named
  /// "year" (any case) is picked up automatically.
  std::optional<ColumnRef> year_column;
  /// Field separator; '\0' detects one of ',', '\t', ';' from the first line.
  char delimiter = '\0';
  bool header = true;
  /// Drop values strictly below this threshold (low-flood removal). Off by
  /// default: zero and very low flows are kept.
  std::optional<double> drop_below;
  /// Defaults to the file stem.
  std::string station_id;
};

struct StationSeries {
  std::string station_id;
  std::vector<double> values;
  std::optional<std::vector<int>> years;
  std::string source_path;
  /// Data rows seen in the file (after header and comment lines).
  std::size_t row_count = 0;
  /// One entry per dropped row or validation warning.
  std::vector<std::string> diagnostics;
};

/// Parses a delimited annual-maxima file. Numbers are read with
/// std::from_chars, so the decimal separator is always '.' whatever the
/// process locale. Rows whose value is blank or non-numeric are dropped with
/// a diagnostic. Throws Error(FileUnreadable), Error(NoNumericColumn) or
/// Error(EmptySeries).
StationSeries load_series(const std::string& path, const ParseOptions& options = {});

/// Same as load_series on an in-memory stream; `source` names it in messages.
StationSeries parse_series(std::istream& in, const ParseOptions& options,
                           const std::string& source = "<stream>");

/// Writes "year,value" (or "value") with a header, using shortest
/// round-trip formatting for the values.
void write_series(std::ostream& out, const StationSeries& series);
void write_series(const std::string& path, const StationSeries& series);

}  // namespace robgev
