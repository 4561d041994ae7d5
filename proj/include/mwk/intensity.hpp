#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mwk/core.hpp"

namespace mwk {

enum class IntensityKind { Constant, Kernel };

std::string_view to_string(IntensityKind kind) noexcept;
IntensityKind parse_intensity_kind(std::string_view name);

// First-order intensity evaluated at the data points.
struct IntensityEstimate {
  std::vector<double> at_points;
  IntensityKind kind = IntensityKind::Constant;
  double bandwidth = 0.0;  // Gaussian sd; 0 for Constant
};

// n / |W| at every point. Needs n >= 1.
IntensityEstimate constant_intensity(const MarkedPattern& pat);

// sigma = 0.15 * shorter side / sqrt(n / 100), clamped to [0.01, 0.5] * shorter side.
double auto_bandwidth(const Window& w, std::size_t n);

// Leave-one-out isotropic Gaussian kernel estimate with uniform edge
// correction:
//   lambda(x_i) = sum_{j != i} phi_sigma(x_i - x_j) / e(x_i),
// where e(x) is the Gaussian mass inside the window. Values are floored at
// 1e-8 * n / |W|. Pairs farther apart than 6 sigma are skipped. Needs n >= 2.
// An empty bandwidth selects auto_bandwidth.
IntensityEstimate kernel_intensity(const MarkedPattern& pat,
                                   std::optional<double> bandwidth = std::nullopt);

// Dispatch on kind; the bandwidth is ignored for Constant.
IntensityEstimate estimate_intensity(const MarkedPattern& pat, IntensityKind kind,
                                     std::optional<double> bandwidth = std::nullopt);

// Edge-corrected kernel intensity surface (including all points) for
// evaluation away from the data, e.g. numeric integration checks.
class KernelIntensityField {
 public:
  KernelIntensityField(const MarkedPattern& pat, double bandwidth);
  double operator()(Point u) const;
  double bandwidth() const noexcept { return sigma_; }

 private:
  std::vector<Point> points_;
  Window window_;
  double sigma_;
};

// Gaussian mass of N(x, sigma^2 I) inside the window.
double gaussian_edge_mass(Point x, const Window& w, double sigma);

}  // namespace mwk
