#include "mwk/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mwk/neighbor_index.hpp"

namespace mwk {
namespace {

void require_points(const MarkedPattern& pat, std::size_t min_n, const char* what) {
  if (pat.size() < min_n) {
    throw ValidationError(std::string(what) + " needs at least " + std::to_string(min_n) +
                          " points, got " + std::to_string(pat.size()));
  }
}

void require_matching(const MarkedPattern& pat, const IntensityEstimate& intensity) {
  if (intensity.at_points.size() != pat.size()) {
    throw ValidationError("intensity estimate does not match the pattern size");
  }
}

// Per-point weights such that sum_{j != i} a_i b_j 1{d_ij <= r}, times a
// global scale, is the requested estimator. With constant intensity the
// lambda factors are folded into the scale so that unit marks reproduce the
// unmarked counts exactly.
struct PairWeights {
  std::vector<double> a;
  std::vector<double> b;
  double global_scale = 0.0;  // multiplies sum_i a_i * row_i
  double local_scale = 0.0;   // multiplies a_i * row_i / c_i
};

PairWeights pair_weights(std::span<const double> marks, double c, const MarkedPattern& pat,
                         const IntensityEstimate& intensity) {
  const std::size_t n = pat.size();
  const double area = pat.window().area();
  const double nd = static_cast<double>(n);
  PairWeights w;
  w.a.resize(n);
  w.b.resize(n);
  if (intensity.kind == IntensityKind::Constant) {
    for (std::size_t i = 0; i < n; ++i) w.a[i] = w.b[i] = marks[i];
    w.global_scale = area / (c * (nd * nd));
    w.local_scale = area / nd;
  } else {
    for (std::size_t i = 0; i < n; ++i) w.a[i] = w.b[i] = marks[i] / intensity.at_points[i];
    w.global_scale = 1.0 / (c * area);
    w.local_scale = nd / area;
  }
  return w;
}

std::vector<double> scaled(std::vector<double> v, double s) {
  for (auto& x : v) x *= s;
  return v;
}

kernels::CurveMatrix local_from_rows(const kernels::CurveMatrix& rows, const PairWeights& w,
                                     std::span<const double> c_i) {
  kernels::CurveMatrix out(rows.rows(), rows.cols());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const double s = w.local_scale * w.a[i] / c_i[i];
    const auto src = rows.row(i);
    auto dst = out.row(i);
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = s * src[k];
  }
  return out;
}

}  // namespace

std::string_view to_string(CurveKind kind) noexcept {
  switch (kind) {
    case CurveKind::K: return "K";
    case CurveKind::Ktf: return "Ktf";
    case CurveKind::KtfInhom: return "KtfInhom";
    case CurveKind::LocalKtf: return "LocalKtf";
    case CurveKind::Kappa: return "Kappa";
    case CurveKind::Reference: return "Reference";
  }
  return "?";
}

MarkSummary mark_summary(const MarkedPattern& pat) {
  require_points(pat, 1, "mark summary");
  const auto marks = pat.marks();
  MarkSummary s;
  s.mean = std::accumulate(marks.begin(), marks.end(), 0.0) / static_cast<double>(marks.size());
  s.c_tf = s.mean * s.mean;
  s.c_tf_i.assign(marks.size(), s.c_tf);
  return s;
}

SecondOrder second_order(const MarkedPattern& pat, const RGrid& grid,
                         const IntensityEstimate& intensity, SecondOrderRequest what) {
  require_points(pat, 2, "second-order summary");
  require_matching(pat, intensity);
  SecondOrder out;
  out.marks = mark_summary(pat);
  if (!(out.marks.c_tf > 0.0)) throw NumericalError("mean mark is zero; c_tf vanishes");

  const NeighborIndex index(pat, grid.rmax());
  const PairWeights mw = pair_weights(pat.marks(), out.marks.c_tf, pat, intensity);
  const kernels::CurveMatrix rows = kernels::neighbor_sums(index, grid, mw.b);
  out.ktf = scaled(kernels::weighted_row_sum(rows, mw.a), mw.global_scale);
  if (what.local) out.local = local_from_rows(rows, mw, out.marks.c_tf_i);

  if (what.unmarked) {
    const std::vector<double> unit(pat.size(), 1.0);
    const PairWeights uw = pair_weights(unit, 1.0, pat, intensity);
    const kernels::CurveMatrix urows = kernels::neighbor_sums(index, grid, uw.b);
    out.k = scaled(kernels::weighted_row_sum(urows, uw.a), uw.global_scale);
  }
  return out;
}

SummaryCurve k_hat(const MarkedPattern& pat, const RGrid& grid) {
  require_points(pat, 2, "K estimate");
  const MarkedPattern unit = pat.with_marks(std::vector<double>(pat.size(), 1.0));
  SecondOrder so = second_order(unit, grid, constant_intensity(unit), {});
  return {grid, std::move(so.ktf), CurveKind::K, std::nullopt};
}

SummaryCurve ktf_hat(const MarkedPattern& pat, const RGrid& grid,
                     const IntensityEstimate& intensity) {
  require_points(pat, 2, "mark-weighted K");
  require_positive_marks(pat, "mark-weighted K");
  SecondOrder so = second_order(pat, grid, intensity, {});
  const CurveKind kind =
      intensity.kind == IntensityKind::Constant ? CurveKind::Ktf : CurveKind::KtfInhom;
  return {grid, std::move(so.ktf), kind, std::nullopt};
}

kernels::CurveMatrix local_ktf_all(const MarkedPattern& pat, const RGrid& grid,
                                   const IntensityEstimate& intensity) {
  require_points(pat, 2, "local mark-weighted K");
  require_positive_marks(pat, "local mark-weighted K");
  return second_order(pat, grid, intensity, {.unmarked = false, .local = true}).local;
}

SummaryCurve local_ktf_hat(const MarkedPattern& pat, const RGrid& grid,
                           const IntensityEstimate& intensity, std::size_t i) {
  if (i >= pat.size()) {
    throw ValidationError("point index " + std::to_string(i) + " out of range for n = " +
                          std::to_string(pat.size()));
  }
  const kernels::CurveMatrix all = local_ktf_all(pat, grid, intensity);
  const auto row = all.row(i);
  return {grid, std::vector<double>(row.begin(), row.end()), CurveKind::LocalKtf, i};
}

double default_kappa_bandwidth(const RGrid& grid) noexcept { return 0.1 * grid.rmax(); }

SummaryCurve kappa_tf_hat(const MarkedPattern& pat, const RGrid& grid,
                          std::optional<double> bandwidth) {
  require_points(pat, 2, "mark correlation");
  const double b = bandwidth.value_or(default_kappa_bandwidth(grid));
  if (!(b > 0.0)) throw ValidationError("mark correlation bandwidth must be positive");
  const MarkSummary ms = mark_summary(pat);
  if (!(ms.c_tf > 0.0)) throw NumericalError("mean mark is zero; kappa is undefined");

  const NeighborIndex index(pat, grid.rmax() + b);
  const kernels::SmoothedPairs sp = kernels::smoothed_mark_products(index, grid, pat.marks(), b);
  std::vector<double> kappa(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    kappa[k] = sp.denominator[k] > 0.0 ? (sp.numerator[k] / sp.denominator[k]) / ms.c_tf : 1.0;
  }
  return {grid, std::move(kappa), CurveKind::Kappa, std::nullopt};
}

SummaryCurve csr_k(const RGrid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) v[k] = std::numbers::pi * grid[k] * grid[k];
  return {grid, std::move(v), CurveKind::Reference, std::nullopt};
}

SummaryCurve ktf_hat_translation(const MarkedPattern& pat, const RGrid& grid) {
  require_points(pat, 2, "mark-weighted K");
  require_positive_marks(pat, "mark-weighted K");
  const MarkSummary ms = mark_summary(pat);
  const Window& w = pat.window();
  const double area = w.area();
  const double nd = static_cast<double>(pat.size());
  const NeighborIndex index(pat, grid.rmax());
  std::vector<double> hist(grid.size(), 0.0);
  for (std::size_t i = 0; i < pat.size(); ++i) {
    const Point p = pat.point(i);
    index.for_each_neighbor(i, grid.rmax(), [&](std::size_t j, double d) {
      const Point q = pat.point(j);
      const double overlap = (w.width() - std::abs(p.x - q.x)) * (w.height() - std::abs(p.y - q.y));
      hist[grid.bin_of(d)] += pat.mark(i) * pat.mark(j) * area / overlap;
    });
  }
  std::partial_sum(hist.begin(), hist.end(), hist.begin());
  return {grid, scaled(std::move(hist), area / (ms.c_tf * nd * nd)), CurveKind::Ktf, std::nullopt};
}

}  // namespace mwk
