#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mwk/core.hpp"
#include "mwk/intensity.hpp"
#include "mwk/kernels.hpp"

namespace mwk {

enum class CurveKind { K, Ktf, KtfInhom, LocalKtf, Kappa, Reference };

std::string_view to_string(CurveKind kind) noexcept;

// A function of r tabulated on a grid. The value at r = 0 is 0 for K-type
// curves and is not stored.
struct SummaryCurve {
  RGrid grid;
  std::vector<double> values;
  CurveKind kind = CurveKind::K;
  std::optional<std::size_t> point;  // set for LocalKtf

  std::size_t size() const noexcept { return values.size(); }
};

// Mean mark and the product test function normalizations. The local
// normalization c_tf_i is the expectation of m_i * mean under independent
// marks, i.e. mean^2 for every point. Dividing by the realized m_i * mean
// instead would cancel the point's own mark from its local curve.
struct MarkSummary {
  double mean = 0.0;
  double c_tf = 0.0;
  std::vector<double> c_tf_i;
};

MarkSummary mark_summary(const MarkedPattern& pat);

// Unmarked K without edge correction:
//   K(r) = |W| / n^2 * #{ordered pairs i != j : d_ij <= r}.
SummaryCurve k_hat(const MarkedPattern& pat, const RGrid& grid);

// Mark-weighted K with test function m_i m_j:
//   K_tf(r) = 1 / (c_tf |W|) * sum_{i != j} m_i m_j 1{d_ij <= r} / (lambda_i lambda_j).
// With constant intensity this is |W| / (c_tf n^2) * sum m_i m_j 1{d_ij <= r}.
SummaryCurve ktf_hat(const MarkedPattern& pat, const RGrid& grid,
                     const IntensityEstimate& intensity);

// Contribution of point i:
//   K_tf,i(r) = n / (|W| c_tf,i) * sum_{j != i} m_i m_j 1{d_ij <= r} / (lambda_i lambda_j),
// with c_tf,i = mean^2 (see MarkSummary),
// normalized so that K_tf = (1/n) sum_i (c_tf,i / c_tf) K_tf,i exactly and
// both have the same expectation under the null models.
SummaryCurve local_ktf_hat(const MarkedPattern& pat, const RGrid& grid,
                           const IntensityEstimate& intensity, std::size_t i);

// All n local curves at once (row i = K_tf,i on the grid).
kernels::CurveMatrix local_ktf_all(const MarkedPattern& pat, const RGrid& grid,
                                   const IntensityEstimate& intensity);

// Mark correlation kappa_tf(r) = c_tf(r) / mean^2, with c_tf(r) a
// Nadaraya-Watson (Epanechnikov, half-width b) estimate of the mean mark
// product over pairs at distance r. Grid points with no pair mass get 1.
// An empty bandwidth selects 0.1 * rmax.
SummaryCurve kappa_tf_hat(const MarkedPattern& pat, const RGrid& grid,
                          std::optional<double> bandwidth = std::nullopt);

double default_kappa_bandwidth(const RGrid& grid) noexcept;

// pi r^2 on the grid.
SummaryCurve csr_k(const RGrid& grid);

// Translation edge-corrected mark-weighted K with constant intensity, for
// exploratory curve output only; never used by the tests.
SummaryCurve ktf_hat_translation(const MarkedPattern& pat, const RGrid& grid);

// Everything the hypothesis tests need from one pattern, computed from a
// single neighbor index pass.
struct SecondOrder {
  MarkSummary marks;
  std::vector<double> k;    // unmarked K (same intensity kind)
  std::vector<double> ktf;  // mark-weighted K
  kernels::CurveMatrix local;  // empty unless requested
};

struct SecondOrderRequest {
  bool unmarked = false;
  bool local = false;
};

SecondOrder second_order(const MarkedPattern& pat, const RGrid& grid,
                         const IntensityEstimate& intensity, SecondOrderRequest what);

}  // namespace mwk
