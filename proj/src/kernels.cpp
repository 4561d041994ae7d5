#include "mwk/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace mwk::kernels {
namespace {

// Below this many rows the fork/join overhead dominates.
constexpr std::size_t kParallelRows = 256;
// Row block for the kernel-smoothed reduction; fixed so the summation tree
// does not depend on the thread count.
constexpr std::size_t kBlockRows = 64;

bool go_parallel(std::size_t rows) { return rows >= kParallelRows && !omp_in_parallel(); }

void check_weights(std::size_t n, std::span<const double> weights) {
  if (weights.size() != n) throw ValidationError("weight vector length differs from point count");
}

}  // namespace

double epanechnikov(double u, double bandwidth) noexcept {
  const double t = u / bandwidth;
  if (t <= -1.0 || t >= 1.0) return 0.0;
  return 0.75 * (1.0 - t * t) / bandwidth;
}

CurveMatrix neighbor_sums(const NeighborIndex& index, const RGrid& grid,
                          std::span<const double> weights) {
  const std::size_t n = index.size();
  const std::size_t nk = grid.size();
  check_weights(n, weights);
  if (index.max_radius() < grid.rmax()) {
    throw ValidationError("neighbor index radius is smaller than the grid rmax");
  }
  CurveMatrix out(n, nk);
  const double rmax = grid.rmax();
  const auto rows = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel for schedule(dynamic, 32) if (go_parallel(n))
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto row = out.row(i);
    index.for_each_neighbor(i, rmax, [&](std::size_t j, double d) {
      row[grid.bin_of(d)] += weights[j];
    });
    for (std::size_t k = 1; k < nk; ++k) row[k] += row[k - 1];
  }
  return out;
}

std::vector<double> weighted_row_sum(const CurveMatrix& m, std::span<const double> coef) {
  if (coef.size() != m.rows()) throw ValidationError("coefficient length differs from row count");
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double c = coef[i];
    const auto row = m.row(i);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * row[k];
  }
  return out;
}

SmoothedPairs smoothed_mark_products(const NeighborIndex& index, const RGrid& grid,
                                     std::span<const double> marks, double bandwidth) {
  const std::size_t n = index.size();
  const std::size_t nk = grid.size();
  check_weights(n, marks);
  if (!(bandwidth > 0.0)) throw ValidationError("smoothing bandwidth must be positive");
  const double reach = grid.rmax() + bandwidth;
  if (index.max_radius() < reach) {
    throw ValidationError("neighbor index radius is smaller than rmax + bandwidth");
  }

  const std::size_t blocks = (n + kBlockRows - 1) / kBlockRows;
  std::vector<double> num(blocks * nk, 0.0);
  std::vector<double> den(blocks * nk, 0.0);
  const auto nblocks = static_cast<std::ptrdiff_t>(blocks);

#pragma omp parallel for schedule(dynamic, 1) if (go_parallel(n))
  for (std::ptrdiff_t bb = 0; bb < nblocks; ++bb) {
    const auto b = static_cast<std::size_t>(bb);
    double* bnum = num.data() + b * nk;
    double* bden = den.data() + b * nk;
    const std::size_t end = std::min(n, (b + 1) * kBlockRows);
    for (std::size_t i = b * kBlockRows; i < end; ++i) {
      const double mi = marks[i];
      index.for_each_neighbor(i, reach, [&](std::size_t j, double d) {
        const double prod = mi * marks[j];
        for (std::size_t k = grid.bin_of(d - bandwidth); k < nk && grid[k] < d + bandwidth; ++k) {
          const double w = epanechnikov(d - grid[k], bandwidth);
          bnum[k] += prod * w;
          bden[k] += w;
        }
      });
    }
  }

  SmoothedPairs out{std::vector<double>(nk, 0.0), std::vector<double>(nk, 0.0)};
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t k = 0; k < nk; ++k) {
      out.numerator[k] += num[b * nk + k];
      out.denominator[k] += den[b * nk + k];
    }
  }
  return out;
}

namespace serial {

CurveMatrix neighbor_sums(std::span<const Point> points, const RGrid& grid,
                          std::span<const double> weights) {
  const std::size_t n = points.size();
  const std::size_t nk = grid.size();
  check_weights(n, weights);
  const auto radii = grid.values();
  CurveMatrix out(n, nk);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = distance(points[i], points[j]);
      const auto first = std::lower_bound(radii.begin(), radii.end(), d);
      for (auto it = first; it != radii.end(); ++it) {
        row[static_cast<std::size_t>(it - radii.begin())] += weights[j];
      }
    }
  }
  return out;
}

SmoothedPairs smoothed_mark_products(std::span<const Point> points, const RGrid& grid,
                                     std::span<const double> marks, double bandwidth) {
  const std::size_t n = points.size();
  const std::size_t nk = grid.size();
  check_weights(n, marks);
  SmoothedPairs out{std::vector<double>(nk, 0.0), std::vector<double>(nk, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = distance(points[i], points[j]);
      for (std::size_t k = 0; k < nk; ++k) {
        const double w = epanechnikov(d - grid[k], bandwidth);
        out.numerator[k] += marks[i] * marks[j] * w;
        out.denominator[k] += w;
      }
    }
  }
  return out;
}

}  // namespace serial

int max_threads() noexcept { return omp_get_max_threads(); }

void set_threads(int n) noexcept {
  static const int default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : default_threads);
}

}  // namespace mwk::kernels
