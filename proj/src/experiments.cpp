#include "mwk/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "mwk/parallel.hpp"
#include "mwk/rng.hpp"

namespace mwk {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class T>
std::optional<double> ratio(T num, T den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

PowerReport run_power(const ScenarioSpec& scenario, Hypothesis h, std::size_t replicates,
                      const TestConfig& test, std::uint64_t seed) {
  if (replicates < 1) throw ValidationError("need at least one replicate");
  if (is_local(h)) throw ValidationError("power runs need a global hypothesis");
  validate(scenario);
  test.validate();
  const auto start = std::chrono::steady_clock::now();

  // 0 = accepted, 1 = rejected, 2 = skipped
  std::vector<int> outcome(replicates, 0);
  parallel_for(replicates, [&](std::size_t r) {
    const LabeledPattern lp = generate(scenario, derive_seed(seed, {r, 0}));
    if (lp.pattern.size() < 2) {
      outcome[r] = 2;
      return;
    }
    TestConfig cfg = test;
    cfg.seed = derive_seed(seed, {r, 1});
    outcome[r] = global_test(lp.pattern, h, cfg).reject ? 1 : 0;
  });

  PowerReport rep;
  rep.scenario = describe(scenario);
  rep.hypothesis = h;
  rep.replicates = replicates;
  rep.rejections = static_cast<std::size_t>(std::count(outcome.begin(), outcome.end(), 1));
  rep.skipped = static_cast<std::size_t>(std::count(outcome.begin(), outcome.end(), 2));
  rep.power = static_cast<double>(rep.rejections) / static_cast<double>(replicates);
  rep.wall_seconds = seconds_since(start);
  return rep;
}

ConfusionCounts confusion(const std::vector<bool>& flagged, const std::vector<bool>& truth) {
  if (flagged.size() != truth.size()) throw ValidationError("flag and truth lengths differ");
  ConfusionCounts c;
  for (std::size_t i = 0; i < flagged.size(); ++i) {
    if (truth[i]) {
      flagged[i] ? ++c.tp : ++c.fn;
    } else {
      flagged[i] ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

void finalize_rates(ClassificationReport& r) {
  r.tpr = ratio(r.tp, r.tp + r.fn);
  r.fpr = ratio(r.fp, r.fp + r.tn);
  r.acc = ratio(r.tp + r.tn, r.tp + r.fn + r.fp + r.tn);
}

ClassificationReport run_classification(const ScenarioSpec& scenario, Hypothesis h,
                                        std::size_t replicates, const TestConfig& test,
                                        std::uint64_t seed) {
  if (replicates < 1) throw ValidationError("need at least one replicate");
  validate(scenario);
  test.validate();
  const Hypothesis lh = local_counterpart(h);
  const auto start = std::chrono::steady_clock::now();

  std::vector<ConfusionCounts> counts(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    const LabeledPattern lp = generate(scenario, derive_seed(seed, {r, 0}));
    if (lp.pattern.size() < 2) {
      // Too small to test: every point counts as not flagged.
      counts[r] = confusion(std::vector<bool>(lp.truth.size(), false), lp.truth);
      return;
    }
    TestConfig cfg = test;
    cfg.seed = derive_seed(seed, {r, 1});
    counts[r] = confusion(local_test(lp.pattern, lh, cfg).reject, lp.truth);
  });

  ClassificationReport rep;
  rep.scenario = describe(scenario);
  rep.hypothesis = lh;
  rep.replicates = replicates;
  double sum_tpr = 0.0, sum_fpr = 0.0, sum_acc = 0.0;
  std::size_t n_tpr = 0, n_fpr = 0, n_acc = 0;
  for (const auto& c : counts) {
    rep.tp += c.tp;
    rep.fp += c.fp;
    rep.tn += c.tn;
    rep.fn += c.fn;
    if (auto v = ratio(c.tp, c.tp + c.fn)) sum_tpr += *v, ++n_tpr;
    if (auto v = ratio(c.fp, c.fp + c.tn)) sum_fpr += *v, ++n_fpr;
    if (auto v = ratio(c.tp + c.tn, c.tp + c.tn + c.fp + c.fn)) sum_acc += *v, ++n_acc;
  }
  finalize_rates(rep);
  if (n_tpr) rep.mean_tpr = sum_tpr / static_cast<double>(n_tpr);
  if (n_fpr) rep.mean_fpr = sum_fpr / static_cast<double>(n_fpr);
  if (n_acc) rep.mean_acc = sum_acc / static_cast<double>(n_acc);
  rep.wall_seconds = seconds_since(start);
  return rep;
}

double kolmogorov_survival(double x) {
  if (!(x > 0.0)) return 1.0;
  if (x < 1.18) {
    // Theta-function form of the CDF converges fast for small x.
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      cdf += std::exp(-odd * odd * c);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    q += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ValidationError("Kolmogorov-Smirnov test needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());

  // Sweep the merged order; ties across samples advance both before comparing.
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }

  KsResult res;
  res.d = d;
  res.n1 = x.size();
  res.n2 = y.size();
  res.p_value = kolmogorov_survival(std::sqrt(n1 * n2 / (n1 + n2)) * d);
  return res;
}

ScenarioSpec global_design(Hypothesis h, double expected_n, double mark_power) {
  ScenarioSpec s;
  s.window = Window::unit_square();
  s.marks = BoundaryPower{mark_power};
  if (global_counterpart(h) == Hypothesis::H2) {
    s.generator = InhomPoissonLinear{2.0 * (expected_n - 10.0)};
  } else {
    s.generator = HomPoisson{expected_n};
  }
  return s;
}

ScenarioSpec local_design(Hypothesis h, double expected_n) {
  ScenarioSpec s;
  s.window = Window::unit_square();
  switch (global_counterpart(h)) {
    case Hypothesis::H1:
      s.generator = ThomasSuperposition{thomas_for_expected(expected_n, s.window)};
      s.marks = ClusterGaussianMarks{5.0, 1.0};
      break;
    case Hypothesis::H2:
      s.generator = ThomasSuperposition{thomas_for_expected(expected_n, s.window)};
      s.marks = IidUniform01{};
      break;
    default:
      s.generator = HomPoisson{expected_n};
      s.marks = LocalGaussianCenters{3, 0.05, 5.0, 1.0};
      break;
  }
  return s;
}

}  // namespace mwk
