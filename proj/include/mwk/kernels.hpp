#pragma once

// Pair-accumulation kernels behind every second-order estimator.
//
// The default implementations walk a NeighborIndex and split the outer point
// loop across OpenMP threads. Each point's row is produced independently and
// every cross-row reduction runs in a fixed order, so results are bit-identical
// for any thread count. The `serial` namespace holds brute-force O(n^2 K)
// reference versions used by the tests and the benchmark.

#include <cstddef>
#include <span>
#include <vector>

#include "mwk/core.hpp"
#include "mwk/neighbor_index.hpp"

namespace mwk::kernels {

// Dense row-major matrix of per-point curves on a grid.
class CurveMatrix {
 public:
  CurveMatrix() = default;
  CurveMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t k) const noexcept { return data_[i * cols_ + k]; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Row i, column k: sum of weights[j] over j != i with d_ij <= r_k.
// Requires index.max_radius() >= grid.rmax().
CurveMatrix neighbor_sums(const NeighborIndex& index, const RGrid& grid,
                          std::span<const double> weights);

// Column-wise sum_i coef[i] * m(i, k), accumulated in increasing i.
std::vector<double> weighted_row_sum(const CurveMatrix& m, std::span<const double> coef);

// Numerator and denominator of the Nadaraya-Watson estimate of the mean mark
// product at distance r_k, using an Epanechnikov kernel of half-width
// `bandwidth` over all ordered pairs:
//   numerator[k]   = sum_{i != j} m_i m_j k_b(d_ij - r_k)
//   denominator[k] = sum_{i != j}         k_b(d_ij - r_k)
struct SmoothedPairs {
  std::vector<double> numerator;
  std::vector<double> denominator;
};

// Requires index.max_radius() >= grid.rmax() + bandwidth.
SmoothedPairs smoothed_mark_products(const NeighborIndex& index, const RGrid& grid,
                                     std::span<const double> marks, double bandwidth);

double epanechnikov(double u, double bandwidth) noexcept;

namespace serial {

CurveMatrix neighbor_sums(std::span<const Point> points, const RGrid& grid,
                          std::span<const double> weights);

SmoothedPairs smoothed_mark_products(std::span<const Point> points, const RGrid& grid,
                                     std::span<const double> marks, double bandwidth);

}  // namespace serial

// Worker threads used by parallel regions (omp_get_max_threads()).
int max_threads() noexcept;

// Caps the worker threads for subsequent parallel regions; n <= 0 restores
// the runtime default.
void set_threads(int n) noexcept;

}  // namespace mwk::kernels
