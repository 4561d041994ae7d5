#include <doctest.h>

#include <random>

#include "mwk/experiments.hpp"
#include "oracle.hpp"

using namespace mwk;

TEST_CASE("confusion counts and rates") {
  const std::vector<bool> flagged{true, true, false, false, true};
  const std::vector<bool> truth{true, false, false, true, true};
  const ConfusionCounts c = confusion(flagged, truth);
  CHECK(c.tp == 2);
  CHECK(c.fp == 1);
  CHECK(c.tn == 1);
  CHECK(c.fn == 1);
  CHECK_THROWS_AS(confusion({true}, {true, false}), ValidationError);

  ClassificationReport r;
  r.tp = 2, r.fp = 1, r.tn = 1, r.fn = 1;
  finalize_rates(r);
  CHECK(*r.tpr == doctest::Approx(2.0 / 3));
  CHECK(*r.fpr == doctest::Approx(0.5));
  CHECK(*r.acc == doctest::Approx(0.6));
}

TEST_CASE("a detector that flags nothing") {
  const std::vector<bool> truth{true, false, false, false};
  const ConfusionCounts c = confusion(std::vector<bool>(4, false), truth);
  ClassificationReport r;
  r.tp = c.tp, r.fp = c.fp, r.tn = c.tn, r.fn = c.fn;
  finalize_rates(r);
  CHECK(*r.tpr == 0.0);
  CHECK(*r.fpr == 0.0);
  CHECK(*r.acc == doctest::Approx(0.75));
}

TEST_CASE("undefined rates stay empty") {
  ClassificationReport r;
  r.tn = 5;
  finalize_rates(r);
  CHECK_FALSE(r.tpr.has_value());
  CHECK(*r.fpr == 0.0);
}

TEST_CASE("two-sample KS examples") {
  const std::vector<double> a{1, 2, 3, 4};
  const KsResult same = ks_two_sample(a, a);
  CHECK(same.d == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(ks_two_sample(a, std::vector<double>{5, 6, 7, 8}).d == 1.0);
  CHECK(ks_two_sample(std::vector<double>{0.1, 0.5}, std::vector<double>{0.3, 0.7}).d ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(ks_two_sample(a, std::vector<double>{}), ValidationError);
}

TEST_CASE("KS distance matches direct ECDF evaluation, with ties") {
  Rng rng = make_rng(3);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_int_distribution<int> val(0, 9);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> a(static_cast<std::size_t>(len(rng))), b(static_cast<std::size_t>(len(rng)));
    for (double& v : a) v = val(rng);
    for (double& v : b) v = val(rng) + 0.5 * (rep % 2);
    const KsResult r = ks_two_sample(a, b);
    CHECK(r.d == doctest::Approx(oracle::ks_d(a, b)).epsilon(1e-15));
    CHECK(r.n1 == a.size());
    CHECK(r.n2 == b.size());
  }
}

TEST_CASE("Kolmogorov survival function") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(0.5) == doctest::Approx(0.963945).epsilon(1e-5));
  CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.269999671).epsilon(1e-7));
  CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(0.005));
  CHECK(kolmogorov_survival(2.0) == doctest::Approx(0.000670925).epsilon(1e-5));
  // Both series agree where they hand over.
  const double x = 1.18;
  double alt = 0.0;
  for (int k = 1; k < 50; ++k) alt += 2 * (k % 2 ? 1 : -1) * std::exp(-2.0 * k * k * x * x);
  CHECK(kolmogorov_survival(x - 1e-12) == doctest::Approx(alt).epsilon(1e-10));
}

TEST_CASE("simulation study designs") {
  const ScenarioSpec g1 = global_design(Hypothesis::H1, 50, 2);
  CHECK(std::get<HomPoisson>(g1.generator).lambda == 50);
  CHECK(std::get<BoundaryPower>(g1.marks).h == 2);
  CHECK(std::get<InhomPoissonLinear>(global_design(Hypothesis::H2, 100, 1).generator).alpha == 180);
  CHECK(std::get<InhomPoissonLinear>(global_design(Hypothesis::H2, 25, 1).generator).alpha == 30);
  CHECK(std::holds_alternative<HomPoisson>(global_design(Hypothesis::H3, 25, 3).generator));
  CHECK(std::holds_alternative<ClusterGaussianMarks>(local_design(Hypothesis::H1L, 50).marks));
  CHECK(std::holds_alternative<IidUniform01>(local_design(Hypothesis::H2L, 50).marks));
  CHECK(std::get<LocalGaussianCenters>(local_design(Hypothesis::H3L, 50).marks).k == 3);
}

TEST_CASE("power run reproducibility and size under the null") {
  const ScenarioSpec null{HomPoisson{50}, IidUniform01{}, Window::unit_square()};
  TestConfig t;
  t.replicates = 39;
  const PowerReport a = run_power(null, Hypothesis::H1, 60, t, 5);
  const PowerReport b = run_power(null, Hypothesis::H1, 60, t, 5);
  CHECK(a.rejections == b.rejections);
  CHECK(a.power <= 0.15);
  CHECK(a.scenario == "hom_poisson(lambda=50)+iid_uniform01");
  CHECK_THROWS_AS(run_power(null, Hypothesis::H1L, 5, t, 1), ValidationError);
}

TEST_CASE("power run counts tiny patterns as skipped") {
  const ScenarioSpec tiny{BinomialFixedN{1}, IidUniform01{}, Window::unit_square()};
  const PowerReport r = run_power(tiny, Hypothesis::H1, 5, TestConfig{}, 1);
  CHECK(r.skipped == 5);
  CHECK(r.power == 0.0);
}

TEST_CASE("classification under the null has false positives near alpha") {
  const ScenarioSpec null{HomPoisson{50}, IidUniform01{}, Window::unit_square()};
  TestConfig t;
  t.replicates = 19;
  const ClassificationReport r = run_classification(null, Hypothesis::H1L, 40, t, 3);
  CHECK_FALSE(r.tpr.has_value());
  REQUIRE(r.fpr.has_value());
  CHECK(*r.fpr <= 0.10);
  CHECK(r.tp + r.fp + r.tn + r.fn > 0);
  const ClassificationReport again = run_classification(null, Hypothesis::H1L, 40, t, 3);
  CHECK(again.fp == r.fp);
}

TEST_CASE("classification finds planted mark hotspots") {
  TestConfig t;
  t.replicates = 19;
  const ClassificationReport r = run_classification(local_design(Hypothesis::H3L, 100), Hypothesis::H3L, 10, t, 2);
  REQUIRE(r.tpr.has_value());
  CHECK(*r.tpr > 0.3);
  CHECK(*r.fpr < 0.1);
  CHECK(r.mean_tpr.has_value());
}
