#include "mwk/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mwk {

double distance(Point p, Point q) noexcept { return std::hypot(p.x - q.x, p.y - q.y); }

Window::Window(double xmin, double xmax, double ymin, double ymax)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
  if (!std::isfinite(xmin) || !std::isfinite(xmax) || !std::isfinite(ymin) ||
      !std::isfinite(ymax)) {
    throw ValidationError("window bounds must be finite");
  }
  if (!(xmax > xmin) || !(ymax > ymin)) {
    throw ValidationError("window must satisfy xmax > xmin and ymax > ymin");
  }
}

double Window::shorter_side() const noexcept { return std::min(width(), height()); }

double Window::diagonal() const noexcept { return std::hypot(width(), height()); }

bool Window::contains(Point p) const noexcept {
  return p.x >= xmin_ && p.x <= xmax_ && p.y >= ymin_ && p.y <= ymax_;
}

double boundary_distance(Point p, const Window& w) {
  if (!w.contains(p)) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ") lies outside the window";
    throw ValidationError(os.str());
  }
  return std::min({p.x - w.xmin(), w.xmax() - p.x, p.y - w.ymin(), w.ymax() - p.y});
}

RGrid::RGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw ValidationError("distance grid needs at least two radii");
  if (!(values_.front() > 0.0)) throw ValidationError("distance grid must start above r = 0");
  for (std::size_t k = 1; k < values_.size(); ++k) {
    if (!(values_[k] > values_[k - 1])) {
      throw ValidationError("distance grid must be strictly increasing");
    }
  }
  step_ = (values_.back() - values_.front()) / static_cast<double>(values_.size() - 1);
  for (std::size_t k = 1; k < values_.size(); ++k) {
    const double dr = values_[k] - values_[k - 1];
    if (std::abs(dr - step_) > 1e-12 * values_.back()) {
      throw ValidationError("distance grid must be uniformly spaced");
    }
  }
}

RGrid RGrid::uniform(double rmax, std::size_t k) {
  if (k < 2) throw ValidationError("grid size must be at least 2");
  if (!(rmax > 0.0) || !std::isfinite(rmax)) throw ValidationError("rmax must be positive");
  std::vector<double> v(k);
  for (std::size_t i = 0; i < k; ++i) {
    v[i] = rmax * static_cast<double>(i + 1) / static_cast<double>(k);
  }
  return RGrid(std::move(v));
}

std::size_t RGrid::bin_of(double d) const noexcept {
  if (d <= values_.front()) return 0;
  if (d > values_.back()) return values_.size();
  // Initial guess from the uniform spacing, then fix up against the stored
  // values so ties d == r_k land in bin k.
  auto k = static_cast<std::size_t>(std::ceil(d / step_));
  k = std::min(k == 0 ? 0 : k - 1, values_.size() - 1);
  while (k + 1 < values_.size() && values_[k] < d) ++k;
  while (k > 0 && values_[k - 1] >= d) --k;
  return k;
}

RGrid default_rgrid(const Window& w, std::size_t k) {
  return RGrid::uniform(0.25 * w.shorter_side(), k);
}

MarkedPattern::MarkedPattern(Window window) : window_(window) {}

MarkedPattern::MarkedPattern(Unchecked, std::vector<Point> points, std::vector<double> marks,
                             Window window)
    : points_(std::move(points)), marks_(std::move(marks)), window_(window) {}

MarkedPattern::MarkedPattern(std::vector<Point> points, std::vector<double> marks, Window window)
    : points_(std::move(points)), marks_(std::move(marks)), window_(window) {
  if (points_.size() != marks_.size()) {
    throw ValidationError("points and marks must have the same length");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ValidationError("point " + std::to_string(i) + " has non-finite coordinates");
    }
    if (!window_.contains(p)) {
      throw ValidationError("point " + std::to_string(i) + " lies outside the window");
    }
    if (!std::isfinite(marks_[i])) {
      throw ValidationError("point " + std::to_string(i) + " has a non-finite mark");
    }
  }
  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Point pa = points_[a];
    const Point pb = points_[b];
    return pa.x < pb.x || (pa.x == pb.x && pa.y < pb.y);
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (points_[order[k]] == points_[order[k - 1]]) {
      throw ValidationError("points " + std::to_string(order[k - 1]) + " and " +
                            std::to_string(order[k]) + " share coordinates");
    }
  }
}

MarkedPattern MarkedPattern::with_marks(std::vector<double> marks) const {
  if (marks.size() != points_.size()) {
    throw ValidationError("mark vector length differs from the number of points");
  }
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (!std::isfinite(marks[i])) {
      throw ValidationError("point " + std::to_string(i) + " has a non-finite mark");
    }
  }
  return MarkedPattern(Unchecked{}, points_, std::move(marks), window_);
}

void require_positive_marks(const MarkedPattern& pat, const std::string& what) {
  const auto marks = pat.marks();
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (!(marks[i] > 0.0)) {
      std::ostringstream os;
      os << what << ": mark of point " << i << " is " << marks[i]
         << "; the product test function needs strictly positive marks";
      throw ValidationError(os.str());
    }
  }
}

}  // namespace mwk
