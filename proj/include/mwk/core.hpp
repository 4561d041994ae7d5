#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwk {

// Invalid arguments or inputs that the caller can fix (bad parameters,
// malformed files, unsupported configurations).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failures that happen while computing (degenerate statistics, numeric issues).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point p, Point q) noexcept;

// Axis-aligned rectangular observation window.
class Window {
 public:
  Window(double xmin, double xmax, double ymin, double ymax);

  static Window unit_square() { return Window(0.0, 1.0, 0.0, 1.0); }

  double xmin() const noexcept { return xmin_; }
  double xmax() const noexcept { return xmax_; }
  double ymin() const noexcept { return ymin_; }
  double ymax() const noexcept { return ymax_; }
  double width() const noexcept { return xmax_ - xmin_; }
  double height() const noexcept { return ymax_ - ymin_; }
  double area() const noexcept { return width() * height(); }
  double shorter_side() const noexcept;
  double diagonal() const noexcept;

  bool contains(Point p) const noexcept;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  double xmin_;
  double xmax_;
  double ymin_;
  double ymax_;
};

// Distance from p to the nearest window edge. Throws ValidationError when p is
// outside the window.
double boundary_distance(Point p, const Window& w);

// Uniformly spaced distances r_1 < ... < r_K with r_1 > 0.
class RGrid {
 public:
  explicit RGrid(std::vector<double> values);

  // {rmax * i / k : i = 1..k}
  static RGrid uniform(double rmax, std::size_t k);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  std::span<const double> values() const noexcept { return values_; }
  double rmax() const noexcept { return values_.back(); }
  double step() const noexcept { return step_; }

  // Smallest k with r_k >= d, or size() when d > rmax.
  std::size_t bin_of(double d) const noexcept;

  friend bool operator==(const RGrid& a, const RGrid& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
  double step_ = 0.0;
};

inline constexpr std::size_t kDefaultGridSize = 128;

// rmax = 0.25 * shorter window side, k equally spaced radii.
RGrid default_rgrid(const Window& w, std::size_t k = kDefaultGridSize);

// Point locations with one real mark per point, observed in a window.
//
// Construction validates that all points lie in the window, marks are finite,
// and no two points share coordinates.
class MarkedPattern {
 public:
  MarkedPattern(std::vector<Point> points, std::vector<double> marks, Window window);

  // Empty pattern in the given window.
  explicit MarkedPattern(Window window);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::span<const Point> points() const noexcept { return points_; }
  std::span<const double> marks() const noexcept { return marks_; }
  const Window& window() const noexcept { return window_; }
  Point point(std::size_t i) const { return points_.at(i); }
  double mark(std::size_t i) const { return marks_.at(i); }

  // Same locations, new marks. Locations are not re-validated.
  MarkedPattern with_marks(std::vector<double> marks) const;

  // Intensity under homogeneity, n / |W|.
  double mean_intensity() const noexcept {
    return static_cast<double>(points_.size()) / window_.area();
  }

 private:
  struct Unchecked {};
  MarkedPattern(Unchecked, std::vector<Point> points, std::vector<double> marks, Window window);

  std::vector<Point> points_;
  std::vector<double> marks_;
  Window window_;
};

// Throws ValidationError unless every mark is strictly positive; `what` names
// the caller in the message.
void require_positive_marks(const MarkedPattern& pat, const std::string& what);

}  // namespace mwk
