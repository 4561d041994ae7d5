#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mwk/core.hpp"
#include "mwk/summaries.hpp"

namespace mwk {

// A pattern read from CSV together with any extra numeric columns
// (covariates such as depth or time) and an optional `truth` column.
struct PatternTable {
  MarkedPattern pattern;
  std::vector<std::string> extra_names;
  std::vector<std::vector<double>> extra_values;
  std::optional<std::vector<bool>> truth;

  // Values of a named column: x, y, the mark column or any extra column.
  // Throws ValidationError if missing.
  std::vector<double> column(std::string_view name) const;

  std::string mark_column = "mark";
};

// Parses `x,y,<mark_column>[,extra...]` CSV with a header row. Fields are
// plain (unquoted) numbers. When no window is given the bounding box of the
// points is used. Errors name the offending line.
PatternTable read_pattern_csv(std::istream& in, std::optional<Window> window = std::nullopt,
                              std::string_view mark_column = "mark");
PatternTable read_pattern_csv(const std::string& path, std::optional<Window> window = std::nullopt,
                              std::string_view mark_column = "mark");

// Plain numeric table with a header row, for inputs that need not form a
// valid pattern (e.g. grouped covariates for the KS comparison).
struct NumericTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(std::string_view name) const;
};

NumericTable read_numeric_csv(std::istream& in);
NumericTable read_numeric_csv(const std::string& path);

// Writes `x,y,mark[,truth]` with 17 significant digits.
void write_pattern_csv(std::ostream& out, const MarkedPattern& pat,
                       const std::vector<bool>* truth = nullptr);
void write_pattern_csv(const std::string& path, const MarkedPattern& pat,
                       const std::vector<bool>* truth = nullptr);

// Round-trip decimal representation of a double.
std::string format_double(double v);

struct NamedCurve {
  std::string name;
  const SummaryCurve* curve;
};

// Wide CSV: r followed by one column per curve. All curves must share a grid.
void write_curves_csv(std::ostream& out, const std::vector<NamedCurve>& curves);

}  // namespace mwk
