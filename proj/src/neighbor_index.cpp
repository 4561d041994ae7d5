#include "mwk/neighbor_index.hpp"

#include <algorithm>
#include <cmath>

namespace mwk {

NeighborIndex::NeighborIndex(std::span<const Point> points, const Window& window,
                             double max_radius)
    : points_(points.begin(), points.end()),
      max_radius_(max_radius),
      x0_(window.xmin()),
      y0_(window.ymin()) {
  if (!(max_radius > 0.0) || !std::isfinite(max_radius)) {
    throw ValidationError("neighbor index radius must be positive and finite");
  }
  const auto cells_along = [&](double extent) {
    const double m = std::floor(extent / max_radius);
    // Cap the grid so tiny radii on huge windows cannot explode memory.
    return static_cast<std::size_t>(std::clamp(m, 1.0, 2048.0));
  };
  nx_ = cells_along(window.width());
  ny_ = cells_along(window.height());
  cell_w_ = window.width() / static_cast<double>(nx_);
  cell_h_ = window.height() / static_cast<double>(ny_);

  const auto clamp_cell = [](double v, std::size_t n) {
    if (!(v > 0.0)) return std::size_t{0};
    return std::min(static_cast<std::size_t>(v), n - 1);
  };
  point_cell_.resize(points_.size());
  std::vector<std::size_t> counts(nx_ * ny_, 0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const std::size_t gx = clamp_cell((points_[i].x - x0_) / cell_w_, nx_);
    const std::size_t gy = clamp_cell((points_[i].y - y0_) / cell_h_, ny_);
    point_cell_[i] = gy * nx_ + gx;
    ++counts[point_cell_[i]];
  }
  cell_start_.assign(nx_ * ny_ + 1, 0);
  for (std::size_t c = 0; c < counts.size(); ++c) cell_start_[c + 1] = cell_start_[c] + counts[c];
  cell_items_.resize(points_.size());
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i) cell_items_[fill[point_cell_[i]]++] = i;
}

void NeighborIndex::check_radius(double r) const {
  if (r > max_radius_) {
    throw ValidationError("neighbor query radius exceeds the index radius");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> NeighborIndex::pairs_within(double r) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::vector<std::size_t> row;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    row.clear();
    for_each_neighbor(i, r, [&](std::size_t j, double) { row.push_back(j); });
    std::sort(row.begin(), row.end());
    for (std::size_t j : row) out.emplace_back(i, j);
  }
  return out;
}

}  // namespace mwk
