#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mwk/simulate.hpp"
#include "mwk/summaries.hpp"
#include "oracle.hpp"

using namespace mwk;

namespace {

const Window kUnit = Window::unit_square();

MarkedPattern three_points() {
  return MarkedPattern({{0.1, 0.1}, {0.1, 0.2}, {0.5, 0.5}}, {1, 2, 3}, kUnit);
}

RGrid grid_with(double r) { return RGrid({r / 2, r}); }

MarkedPattern csr_uniform(std::uint64_t seed, double lambda = 100) {
  Rng rng = make_rng(seed);
  return assign_marks_uniform(gen_hom_poisson(lambda, kUnit, rng), rng);
}

// Mean of K_tf over 500 CSR patterns with E[N]=100 and uniform marks.
struct CsrMoments {
  RGrid grid = default_rgrid(kUnit);
  std::vector<double> k_mean, k_se, ktf_mean, ktf_se;
};

const CsrMoments& csr_moments() {
  static const CsrMoments m = [] {
    CsrMoments out;
    const std::size_t nk = out.grid.size();
    std::vector<double> s1(nk), s2(nk), t1(nk), t2(nk);
    const double reps = 500;
    for (std::uint64_t s = 0; s < 500; ++s) {
      const MarkedPattern p = csr_uniform(derive_seed(2024, {s}));
      const auto so = second_order(p, out.grid, constant_intensity(p), {true, false});
      for (std::size_t k = 0; k < nk; ++k) {
        s1[k] += so.k[k];
        s2[k] += so.k[k] * so.k[k];
        t1[k] += so.ktf[k];
        t2[k] += so.ktf[k] * so.ktf[k];
      }
    }
    for (std::size_t k = 0; k < nk; ++k) {
      const auto push = [&](double a, double b, auto& mean, auto& se) {
        const double m = a / reps;
        mean.push_back(m);
        se.push_back(std::sqrt((b / reps - m * m) * reps / (reps - 1) / reps));
      };
      push(s1[k], s2[k], out.k_mean, out.k_se);
      push(t1[k], t2[k], out.ktf_mean, out.ktf_se);
    }
    return out;
  }();
  return m;
}

// E[(N - 1) / N] for N ~ Poisson(mean), with N = 0 contributing nothing.
double poisson_pair_factor(double mean) {
  double total = 0.0;
  double pmf = std::exp(-mean);
  for (int n = 1; n < 400; ++n) {
    pmf *= mean / n;
    total += pmf * (n - 1.0) / n;
  }
  return total;
}

// Grid points r <= 0.125 whose mean lies outside the 99% band around pi r^2.
int outside_pi_r2_band(const RGrid& grid, const std::vector<double>& mean,
                       const std::vector<double>& se) {
  int outside = 0;
  for (std::size_t k = 0; k < grid.size() && grid[k] <= 0.125; ++k) {
    const double ref = std::numbers::pi * grid[k] * grid[k];
    outside += std::abs(mean[k] - ref) > 2.576 * se[k];
  }
  return outside;
}

}  // namespace

TEST_CASE("hand-enumerated values for three points") {
  const MarkedPattern p = three_points();
  const RGrid g = grid_with(0.15);
  CHECK(k_hat(p, g).values[1] == doctest::Approx(2.0 / 9.0));
  CHECK(ktf_hat(p, g, constant_intensity(p)).values[1] == doctest::Approx(1.0 / 9.0));
  // n / (|W| mean^2) * m_0 m_1 / lambda^2 = 3/4 * 2/9
  CHECK(local_ktf_hat(p, g, constant_intensity(p), 0).values[1] == doctest::Approx(1.0 / 6.0));
  CHECK(local_ktf_hat(p, g, constant_intensity(p), 2).values[1] == 0.0);
}

TEST_CASE("below the smallest interpoint distance every curve is zero") {
  const MarkedPattern p = three_points();
  const RGrid g({0.01, 0.02, 0.03});
  for (double v : k_hat(p, g).values) CHECK(v == 0.0);
  for (double v : ktf_hat(p, g, constant_intensity(p)).values) CHECK(v == 0.0);
}

TEST_CASE("mark summary") {
  const MarkSummary a = mark_summary(three_points());
  CHECK(a.mean == 2.0);
  CHECK(a.c_tf == 4.0);
  CHECK(a.c_tf_i == std::vector<double>{4.0, 4.0, 4.0});
  const MarkSummary b = mark_summary(three_points().with_marks({1, 1, 1}));
  CHECK(b.c_tf == 1.0);
  CHECK(b.c_tf_i[0] == 1.0);
  const MarkSummary c = mark_summary(MarkedPattern({{0.5, 0.5}}, {0.5}, kUnit));
  CHECK(c.mean == 0.5);
  CHECK(c.c_tf == 0.25);
}

TEST_CASE("estimators match brute force") {
  Rng rng = make_rng(77);
  const Window w(0, 3, 0, 2);
  std::uniform_int_distribution<std::size_t> nd(2, 30);
  const RGrid g = default_rgrid(w, 24);
  for (int rep = 0; rep < 40; ++rep) {
    const MarkedPattern p = assign_marks_uniform(gen_binomial(nd(rng), w, rng), rng);
    const std::vector<Point> pts(p.points().begin(), p.points().end());
    const std::vector<double> m(p.marks().begin(), p.marks().end());
    for (const auto& lam : {constant_intensity(p), kernel_intensity(p, 0.4)}) {
      const auto ktf = ktf_hat(p, g, lam);
      const auto local = local_ktf_all(p, g, lam);
      for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(ktf.values[k] ==
              doctest::Approx(oracle::ktf(pts, m, lam.at_points, w.area(), g[k])).epsilon(1e-12));
        for (std::size_t i = 0; i < p.size(); ++i) {
          CHECK(local(i, k) ==
                doctest::Approx(oracle::local_ktf(pts, m, lam.at_points, w.area(), i, g[k]))
                    .epsilon(1e-12));
        }
      }
    }
    const auto kh = k_hat(p, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(kh.values[k] == doctest::Approx(oracle::k(pts, w.area(), g[k])).epsilon(1e-12));
    }
  }
}

TEST_CASE("aggregation identity") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const MarkedPattern p = csr_uniform(s, 60);
    const RGrid g = default_rgrid(kUnit, 32);
    const MarkSummary ms = mark_summary(p);
    for (const auto& lam : {constant_intensity(p), kernel_intensity(p)}) {
      const auto so = second_order(p, g, lam, {false, true});
      for (std::size_t k = 0; k < g.size(); ++k) {
        double agg = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) agg += ms.c_tf_i[i] / ms.c_tf * so.local(i, k);
        agg /= static_cast<double>(p.size());
        CHECK(agg == doctest::Approx(so.ktf[k]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("second_order agrees with the single-curve functions") {
  const MarkedPattern p = csr_uniform(5);
  const RGrid g = default_rgrid(kUnit);
  const auto lam = constant_intensity(p);
  const auto so = second_order(p, g, lam, {true, true});
  CHECK(so.k == k_hat(p, g).values);
  CHECK(so.ktf == ktf_hat(p, g, lam).values);
  const auto l3 = local_ktf_hat(p, g, lam, 3);
  CHECK(std::equal(l3.values.begin(), l3.values.end(), so.local.row(3).begin()));
  CHECK(l3.point == 3u);
}

TEST_CASE("constant marks reduce to the unmarked estimators") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const MarkedPattern u = csr_uniform(s);
    const RGrid g = default_rgrid(kUnit);
    for (double c : {1.0, 0.37, 5.0}) {
      const MarkedPattern p = u.with_marks(std::vector<double>(u.size(), c));
      const auto so = second_order(p, g, constant_intensity(p), {true, true});
      if (c == 1.0) CHECK(so.ktf == so.k);
      const auto unmarked = second_order(p.with_marks(std::vector<double>(u.size(), 1.0)), g,
                                         constant_intensity(p), {true, true});
      for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(so.ktf[k] == doctest::Approx(so.k[k]).epsilon(1e-14));
        for (std::size_t i = 0; i < p.size(); ++i) {
          CHECK(so.local(i, k) == doctest::Approx(unmarked.local(i, k)).epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("curves are nondecreasing in r") {
  const MarkedPattern p = csr_uniform(12);
  const RGrid g = default_rgrid(kUnit);
  const auto so = second_order(p, g, kernel_intensity(p), {true, true});
  for (std::size_t k = 1; k < g.size(); ++k) {
    CHECK(so.k[k] >= so.k[k - 1]);
    CHECK(so.ktf[k] >= so.ktf[k - 1]);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(so.local(i, k) >= so.local(i, k - 1));
  }
}

TEST_CASE("isolated point has a zero local curve") {
  const MarkedPattern p({{0.1, 0.1}, {0.12, 0.1}, {0.8, 0.8}}, {1, 2, 3}, kUnit);
  const auto c = local_ktf_hat(p, default_rgrid(kUnit), constant_intensity(p), 2);
  CHECK(std::all_of(c.values.begin(), c.values.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("nonpositive marks are rejected") {
  const MarkedPattern p = three_points().with_marks({1, -2, 3});
  CHECK_THROWS_AS(ktf_hat(p, default_rgrid(kUnit), constant_intensity(p)), ValidationError);
}

TEST_CASE("permutation mean by full enumeration") {
  Rng rng = make_rng(31);
  for (std::size_t n = 2; n <= 6; ++n) {
    const MarkedPattern base = assign_marks_uniform(gen_binomial(n, kUnit, rng), rng);
    const RGrid g({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5});
    std::vector<double> m(base.marks().begin(), base.marks().end());
    std::sort(m.begin(), m.end());
    std::vector<double> sum(g.size(), 0.0);
    double count = 0.0;
    do {
      const auto c = ktf_hat(base.with_marks(m), g, constant_intensity(base)).values;
      for (std::size_t k = 0; k < g.size(); ++k) sum[k] += c[k];
      count += 1.0;
    } while (std::next_permutation(m.begin(), m.end()));
    const double s1 = std::accumulate(m.begin(), m.end(), 0.0);
    const double s2 = std::inner_product(m.begin(), m.end(), m.begin(), 0.0);
    const double nd = static_cast<double>(n);
    const auto kh = k_hat(base, g).values;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double expect = kh[k] * nd * (s1 * s1 - s2) / ((nd - 1) * s1 * s1);
      CHECK(sum[k] / count == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("mark correlation matches the direct kernel sum") {
  Rng rng = make_rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    const MarkedPattern p = assign_marks_uniform(gen_binomial(40, kUnit, rng), rng);
    const RGrid g = default_rgrid(kUnit, 32);
    const auto kap = kappa_tf_hat(p, g, 0.03);
    const std::vector<Point> pts(p.points().begin(), p.points().end());
    const std::vector<double> m(p.marks().begin(), p.marks().end());
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(kap.values[k] == doctest::Approx(oracle::kappa(pts, m, 0.03, g[k])).epsilon(1e-12));
    }
  }
}

TEST_CASE("mark correlation properties") {
  const RGrid g = default_rgrid(kUnit);
  const MarkedPattern p = csr_uniform(3);
  const auto flat = kappa_tf_hat(p.with_marks(std::vector<double>(p.size(), 2.5)), g);
  for (double v : flat.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<double> scaled(p.marks().begin(), p.marks().end());
  for (double& v : scaled) v *= 7.5;
  const auto a = kappa_tf_hat(p, g);
  const auto b = kappa_tf_hat(p.with_marks(scaled), g);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-12));
  CHECK(default_kappa_bandwidth(g) == doctest::Approx(0.025));
}

TEST_CASE("mark correlation under independence averages to one") {
  const RGrid g = default_rgrid(kUnit);
  std::vector<double> sum(g.size(), 0.0);
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto kap = kappa_tf_hat(csr_uniform(derive_seed(5, {s})), g);
    for (std::size_t k = 0; k < g.size(); ++k) sum[k] += kap.values[k];
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k] < 0.05) continue;
    CHECK(std::abs(sum[k] / 500 - 1.0) < 0.05);
  }
}

TEST_CASE("boundary marks are positively correlated at short range") {
  const RGrid g = default_rgrid(kUnit);
  std::vector<double> sum(g.size(), 0.0);
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng = make_rng(s, {9});
    const auto p = assign_marks_boundary(gen_hom_poisson(100, kUnit, rng), 1.0);
    const auto kap = kappa_tf_hat(p, g);
    for (std::size_t k = 0; k < g.size(); ++k) sum[k] += kap.values[k];
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k] >= 0.02 && g[k] <= 0.1) CHECK(sum[k] / 100 > 1.0);
  }
}

TEST_CASE("CSR mean of K matches the exact no-edge-correction expectation") {
  const CsrMoments& m = csr_moments();
  const double factor = poisson_pair_factor(100);
  for (std::size_t k = 0; k < m.grid.size(); ++k) {
    if (m.grid[k] > 0.125) break;
    const double expect = factor * oracle::unit_square_pair_cdf(m.grid[k]);
    CHECK(std::abs(m.k_mean[k] - expect) <= 2.576 * m.k_se[k]);
  }
}

TEST_CASE("CSR mean of K_tf matches the no-edge expectation with the mark ratio factor") {
  // Locations and marks are independent, so E[K_tf] = P(d <= r) E[1 - S2/S1^2]
  // over the count and mark draws; the mark factor is estimated separately.
  Rng rng = make_rng(99);
  std::poisson_distribution<int> count(100);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double factor = 0.0;
  const int draws = 400000;
  for (int d = 0; d < draws; ++d) {
    const int n = count(rng);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = u(rng);
      s1 += v;
      s2 += v * v;
    }
    if (n >= 2) factor += 1.0 - s2 / (s1 * s1);
  }
  factor /= draws;
  const CsrMoments& m = csr_moments();
  for (std::size_t k = 0; k < m.grid.size(); ++k) {
    if (m.grid[k] > 0.125) break;
    const double expect = factor * oracle::unit_square_pair_cdf(m.grid[k]);
    CHECK(std::abs(m.ktf_mean[k] - expect) <= 2.576 * m.ktf_se[k]);
  }
}

// The estimators carry no edge correction, so their CSR mean sits below pi r^2
// by about (8/3) r^3; these pointwise band checks against pi r^2 are expected
// to fail beyond the smallest radii.
TEST_CASE("CSR mean of K within the band around pi r^2" * doctest::may_fail()) {
  const CsrMoments& m = csr_moments();
  CHECK(outside_pi_r2_band(m.grid, m.k_mean, m.k_se) == 0);
}

TEST_CASE("CSR mean of K_tf within the band around pi r^2" * doctest::may_fail()) {
  const CsrMoments& m = csr_moments();
  CHECK(outside_pi_r2_band(m.grid, m.ktf_mean, m.ktf_se) == 0);
}

TEST_CASE("translation-corrected curve is close to pi r^2 under CSR") {
  const RGrid g = default_rgrid(kUnit);
  std::vector<double> sum(g.size(), 0.0);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto c = ktf_hat_translation(csr_uniform(derive_seed(6, {s})), g);
    for (std::size_t k = 0; k < g.size(); ++k) sum[k] += c.values[k];
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double ref = std::numbers::pi * g[k] * g[k];
    if (g[k] >= 0.05) CHECK(sum[k] / 200 == doctest::Approx(ref).epsilon(0.05));
  }
}
