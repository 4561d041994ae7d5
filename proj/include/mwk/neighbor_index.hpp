#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mwk/core.hpp"

namespace mwk {

// Fixed-radius neighbor search over a bucket grid whose cells are at least
// `max_radius` wide, so every neighbor of a point lies in the 3x3 block of
// cells around it. Read-only after construction.
class NeighborIndex {
 public:
  NeighborIndex(std::span<const Point> points, const Window& window, double max_radius);
  NeighborIndex(const MarkedPattern& pat, double max_radius)
      : NeighborIndex(pat.points(), pat.window(), max_radius) {}

  std::size_t size() const noexcept { return points_.size(); }
  double max_radius() const noexcept { return max_radius_; }
  std::span<const Point> points() const noexcept { return points_; }

  // Calls f(j, d_ij) for every j != i with d_ij <= r. The visiting order is a
  // fixed function of the point set. Requires r <= max_radius().
  template <class F>
  void for_each_neighbor(std::size_t i, double r, F&& f) const;

  // All ordered pairs (i, j), i != j, with d_ij <= r, sorted lexicographically.
  std::vector<std::pair<std::size_t, std::size_t>> pairs_within(double r) const;

 private:
  void check_radius(double r) const;

  std::vector<Point> points_;
  double max_radius_;
  double x0_;
  double y0_;
  double cell_w_;
  double cell_h_;
  std::size_t nx_;
  std::size_t ny_;
  std::vector<std::size_t> point_cell_;
  std::vector<std::size_t> cell_start_;  // nx_*ny_ + 1 offsets into cell_items_
  std::vector<std::size_t> cell_items_;
};

template <class F>
void NeighborIndex::for_each_neighbor(std::size_t i, double r, F&& f) const {
  check_radius(r);
  const Point p = points_[i];
  const std::size_t c = point_cell_[i];
  const std::size_t cx = c % nx_;
  const std::size_t cy = c / nx_;
  const std::size_t x_lo = cx == 0 ? 0 : cx - 1;
  const std::size_t x_hi = cx + 1 < nx_ ? cx + 1 : cx;
  const std::size_t y_lo = cy == 0 ? 0 : cy - 1;
  const std::size_t y_hi = cy + 1 < ny_ ? cy + 1 : cy;
  const double r2 = r * r;
  for (std::size_t gy = y_lo; gy <= y_hi; ++gy) {
    for (std::size_t gx = x_lo; gx <= x_hi; ++gx) {
      const std::size_t cell = gy * nx_ + gx;
      for (std::size_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
        const std::size_t j = cell_items_[k];
        if (j == i) continue;
        const double dx = points_[j].x - p.x;
        const double dy = points_[j].y - p.y;
        // Cheap squared prefilter; the reported distance is the hypot value
        // so ties at d == r are decided the same way as distance().
        if (dx * dx + dy * dy > r2 * (1.0 + 1e-12)) continue;
        const double d = distance(p, points_[j]);
        if (d <= r) f(j, d);
      }
    }
  }
}

}  // namespace mwk
