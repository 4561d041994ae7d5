#include "mwk/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace mwk {
namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  const auto b = std::find_if(s.begin(), s.end(), not_space);
  const auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string_view(&*b, static_cast<std::size_t>(e - b)) : std::string_view{};
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ValidationError("line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view field, std::size_t line, std::string_view column) {
  if (field.empty()) fail(line, "empty " + std::string(column) + " field");
  const std::string s(field);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    fail(line, "cannot parse " + std::string(column) + " value '" + s + "'");
  }
  if (!std::isfinite(v)) fail(line, "non-finite " + std::string(column) + " value '" + s + "'");
  return v;
}

bool parse_flag(std::string_view field, std::size_t line) {
  if (field == "1" || field == "true" || field == "TRUE" || field == "True") return true;
  if (field == "0" || field == "false" || field == "FALSE" || field == "False") return false;
  fail(line, "truth value must be 0/1 or true/false, got '" + std::string(field) + "'");
}

}  // namespace

std::vector<double> PatternTable::column(std::string_view name) const {
  const auto pts = pattern.points();
  if (name == "x" || name == "y") {
    std::vector<double> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = name == "x" ? pts[i].x : pts[i].y;
    return out;
  }
  if (name == mark_column || name == "mark") {
    return {pattern.marks().begin(), pattern.marks().end()};
  }
  for (std::size_t c = 0; c < extra_names.size(); ++c) {
    if (extra_names[c] == name) return extra_values[c];
  }
  if (name == "truth" && truth) {
    std::vector<double> out(truth->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*truth)[i] ? 1.0 : 0.0;
    return out;
  }
  throw ValidationError("no column named '" + std::string(name) + "'");
}

PatternTable read_pattern_csv(std::istream& in, std::optional<Window> window,
                              std::string_view mark_column) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto f : split(line)) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw ValidationError("input has no header row");

  const auto find = [&](std::string_view name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const std::ptrdiff_t ix = find("x");
  const std::ptrdiff_t iy = find("y");
  const std::ptrdiff_t im = find(mark_column);
  if (ix < 0 || iy < 0 || im < 0) {
    throw ValidationError("header must contain x, y and " + std::string(mark_column) +
                          " columns");
  }
  const std::ptrdiff_t itruth = find("truth");

  PatternTable table{MarkedPattern(Window::unit_square()), {}, {}, std::nullopt,
                     std::string(mark_column)};
  std::vector<std::size_t> extra_idx;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto sc = static_cast<std::ptrdiff_t>(c);
    if (sc == ix || sc == iy || sc == im || sc == itruth) continue;
    extra_idx.push_back(c);
    table.extra_names.push_back(header[c]);
  }
  table.extra_values.resize(extra_idx.size());

  std::vector<Point> pts;
  std::vector<double> marks;
  std::vector<bool> truth;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      fail(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    const double x = parse_number(fields[static_cast<std::size_t>(ix)], line_no, "x");
    const double y = parse_number(fields[static_cast<std::size_t>(iy)], line_no, "y");
    const double m = parse_number(fields[static_cast<std::size_t>(im)], line_no, mark_column);
    pts.push_back({x, y});
    marks.push_back(m);
    if (itruth >= 0) truth.push_back(parse_flag(fields[static_cast<std::size_t>(itruth)], line_no));
    for (std::size_t e = 0; e < extra_idx.size(); ++e) {
      table.extra_values[e].push_back(
          parse_number(fields[extra_idx[e]], line_no, table.extra_names[e]));
    }
    if (window && !window->contains(pts.back())) {
      fail(line_no, "point lies outside the window");
    }
  }

  if (!window) {
    if (pts.empty()) throw ValidationError("cannot infer a window from an empty file");
    double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
    for (const Point p : pts) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    if (!(x1 > x0) || !(y1 > y0)) {
      throw ValidationError("points are collinear along an axis; pass the window explicitly");
    }
    window = Window(x0, x1, y0, y1);
  }
  table.pattern = MarkedPattern(std::move(pts), std::move(marks), *window);
  if (itruth >= 0) table.truth = std::move(truth);
  return table;
}

PatternTable read_pattern_csv(const std::string& path, std::optional<Window> window,
                              std::string_view mark_column) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_pattern_csv(in, window, mark_column);
}

const std::vector<double>& NumericTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] == name) return columns[c];
  }
  throw ValidationError("no column named '" + std::string(name) + "'");
}

NumericTable read_numeric_csv(std::istream& in) {
  NumericTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (table.names.empty()) {
      for (auto f : fields) table.names.emplace_back(f);
      table.columns.resize(table.names.size());
      continue;
    }
    if (fields.size() != table.names.size()) {
      fail(line_no, "expected " + std::to_string(table.names.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      table.columns[c].push_back(parse_number(fields[c], line_no, table.names[c]));
    }
  }
  if (table.names.empty()) throw ValidationError("input has no header row");
  return table;
}

NumericTable read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_numeric_csv(in);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_pattern_csv(std::ostream& out, const MarkedPattern& pat,
                       const std::vector<bool>* truth) {
  if (truth && truth->size() != pat.size()) {
    throw ValidationError("truth flags must match the point count");
  }
  out << (truth ? "x,y,mark,truth\n" : "x,y,mark\n");
  for (std::size_t i = 0; i < pat.size(); ++i) {
    const Point p = pat.point(i);
    out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(pat.mark(i));
    if (truth) out << ',' << ((*truth)[i] ? 1 : 0);
    out << '\n';
  }
}

void write_pattern_csv(const std::string& path, const MarkedPattern& pat,
                       const std::vector<bool>* truth) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  write_pattern_csv(out, pat, truth);
}

void write_curves_csv(std::ostream& out, const std::vector<NamedCurve>& curves) {
  if (curves.empty()) throw ValidationError("no curves to write");
  const RGrid& grid = curves.front().curve->grid;
  out << 'r';
  for (const auto& c : curves) {
    if (!(c.curve->grid == grid)) throw ValidationError("curves use different grids");
    out << ',' << c.name;
  }
  out << '\n';
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out << format_double(grid[k]);
    for (const auto& c : curves) out << ',' << format_double(c.curve->values[k]);
    out << '\n';
  }
}

}  // namespace mwk
