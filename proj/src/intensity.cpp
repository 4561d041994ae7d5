#include "mwk/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mwk/neighbor_index.hpp"

namespace mwk {
namespace {

// Kernel truncation radius in units of sigma; the neglected tail mass of the
// bivariate Gaussian beyond 6 sd is exp(-18) ~ 1.5e-8.
constexpr double kCutoffSd = 6.0;

double phi2(double d, double sigma) {
  const double s2 = sigma * sigma;
  return std::exp(-0.5 * d * d / s2) / (2.0 * std::numbers::pi * s2);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

std::string_view to_string(IntensityKind kind) noexcept {
  return kind == IntensityKind::Constant ? "constant" : "kernel";
}

IntensityKind parse_intensity_kind(std::string_view name) {
  if (name == "constant") return IntensityKind::Constant;
  if (name == "kernel") return IntensityKind::Kernel;
  throw ValidationError("unknown intensity kind '" + std::string(name) +
                        "' (expected constant or kernel)");
}

IntensityEstimate constant_intensity(const MarkedPattern& pat) {
  if (pat.empty()) throw ValidationError("constant intensity of an empty pattern");
  return {std::vector<double>(pat.size(), pat.mean_intensity()), IntensityKind::Constant, 0.0};
}

double auto_bandwidth(const Window& w, std::size_t n) {
  const double side = w.shorter_side();
  const double raw = 0.15 * side / std::sqrt(static_cast<double>(n) / 100.0);
  return std::clamp(raw, 0.01 * side, 0.5 * side);
}

double gaussian_edge_mass(Point x, const Window& w, double sigma) {
  const double mx = normal_cdf((w.xmax() - x.x) / sigma) - normal_cdf((w.xmin() - x.x) / sigma);
  const double my = normal_cdf((w.ymax() - x.y) / sigma) - normal_cdf((w.ymin() - x.y) / sigma);
  return mx * my;
}

IntensityEstimate kernel_intensity(const MarkedPattern& pat, std::optional<double> bandwidth) {
  const std::size_t n = pat.size();
  if (n < 2) throw ValidationError("kernel intensity needs at least two points");
  const double sigma = bandwidth.value_or(auto_bandwidth(pat.window(), n));
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("kernel bandwidth must be positive");
  }
  const double floor_value = 1e-8 * pat.mean_intensity();
  const NeighborIndex index(pat, kCutoffSd * sigma);

  IntensityEstimate est{std::vector<double>(n), IntensityKind::Kernel, sigma};
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (n >= 512)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double sum = 0.0;
    index.for_each_neighbor(i, kCutoffSd * sigma,
                            [&](std::size_t, double d) { sum += phi2(d, sigma); });
    const double mass = gaussian_edge_mass(pat.point(i), pat.window(), sigma);
    est.at_points[i] = std::max(sum / mass, floor_value);
  }
  return est;
}

IntensityEstimate estimate_intensity(const MarkedPattern& pat, IntensityKind kind,
                                     std::optional<double> bandwidth) {
  return kind == IntensityKind::Constant ? constant_intensity(pat)
                                         : kernel_intensity(pat, bandwidth);
}

KernelIntensityField::KernelIntensityField(const MarkedPattern& pat, double bandwidth)
    : points_(pat.points().begin(), pat.points().end()), window_(pat.window()), sigma_(bandwidth) {
  if (!(bandwidth > 0.0)) throw ValidationError("kernel bandwidth must be positive");
}

double KernelIntensityField::operator()(Point u) const {
  double sum = 0.0;
  for (const Point p : points_) sum += phi2(distance(u, p), sigma_);
  return sum / gaussian_edge_mass(u, window_, sigma_);
}

}  // namespace mwk
