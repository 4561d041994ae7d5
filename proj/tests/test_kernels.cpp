#include <doctest.h>

#include <random>

#include "mwk/kernels.hpp"
#include "mwk/rng.hpp"
#include "mwk/simulate.hpp"
#include "mwk/summaries.hpp"

using namespace mwk;

namespace {

MarkedPattern random_pattern(std::uint64_t seed, double lambda) {
  Rng rng = make_rng(seed);
  return assign_marks_uniform(gen_hom_poisson(lambda, Window::unit_square(), rng), rng);
}

}  // namespace

TEST_CASE("neighbor sums match the serial reference") {
  const RGrid grid = default_rgrid(Window::unit_square(), 32);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const MarkedPattern p = random_pattern(s, 200);
    const NeighborIndex idx(p, grid.rmax());
    const auto fast = kernels::neighbor_sums(idx, grid, p.marks());
    const auto ref = kernels::serial::neighbor_sums(p.points(), grid, p.marks());
    REQUIRE(fast.rows() == ref.rows());
    for (std::size_t i = 0; i < fast.rows(); ++i) {
      for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(fast(i, k) == doctest::Approx(ref(i, k)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("smoothed mark products match the serial reference") {
  const RGrid grid = default_rgrid(Window::unit_square(), 32);
  const double b = 0.02;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const MarkedPattern p = random_pattern(s, 150);
    const NeighborIndex idx(p, grid.rmax() + b);
    const auto fast = kernels::smoothed_mark_products(idx, grid, p.marks(), b);
    const auto ref = kernels::serial::smoothed_mark_products(p.points(), grid, p.marks(), b);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(fast.numerator[k] == doctest::Approx(ref.numerator[k]).epsilon(1e-12));
      CHECK(fast.denominator[k] == doctest::Approx(ref.denominator[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel radius must cover the grid") {
  const MarkedPattern p = random_pattern(1, 50);
  const RGrid grid = default_rgrid(p.window(), 8);
  const NeighborIndex idx(p, 0.1);
  CHECK_THROWS_AS(kernels::neighbor_sums(idx, grid, p.marks()), ValidationError);
  CHECK_THROWS_AS(kernels::smoothed_mark_products(idx, grid, p.marks(), 0.01), ValidationError);
}

TEST_CASE("results are bit-identical across thread counts") {
  const MarkedPattern p = random_pattern(3, 300);
  const RGrid grid = default_rgrid(p.window());
  const auto lam = kernel_intensity(p);
  const int before = kernels::max_threads();
  kernels::set_threads(1);
  const auto a = second_order(p, grid, lam, {true, true});
  const auto ka = kappa_tf_hat(p, grid);
  kernels::set_threads(4);
  const auto b = second_order(p, grid, lam, {true, true});
  const auto kb = kappa_tf_hat(p, grid);
  kernels::set_threads(before);
  CHECK(a.k == b.k);
  CHECK(a.ktf == b.ktf);
  CHECK(std::equal(a.local.data().begin(), a.local.data().end(), b.local.data().begin()));
  CHECK(ka.values == kb.values);
}

TEST_CASE("epanechnikov kernel") {
  CHECK(kernels::epanechnikov(0.0, 0.5) == doctest::Approx(1.5));
  CHECK(kernels::epanechnikov(0.5, 0.5) == 0.0);
  CHECK(kernels::epanechnikov(-0.25, 0.5) == doctest::Approx(0.75 * 0.75 / 0.5));
}
