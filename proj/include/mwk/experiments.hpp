#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mwk/hypothesis_tests.hpp"
#include "mwk/simulate.hpp"

namespace mwk {

struct PowerReport {
  std::string scenario;
  Hypothesis hypothesis = Hypothesis::H1;
  std::size_t replicates = 0;
  std::size_t rejections = 0;
  std::size_t skipped = 0;  // replicates with fewer than two points (count as non-rejections)
  double power = 0.0;
  double wall_seconds = 0.0;
};

// Generates R patterns from the scenario and runs the global test on each.
// Replicate r uses pattern seed derive_seed(seed, {r, 0}) and test seed
// derive_seed(seed, {r, 1}).
PowerReport run_power(const ScenarioSpec& scenario, Hypothesis h, std::size_t replicates,
                      const TestConfig& test, std::uint64_t seed);

struct ClassificationReport {
  std::string scenario;
  Hypothesis hypothesis = Hypothesis::H1L;
  std::size_t replicates = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  // Rates from counts pooled over replicates; empty when the denominator is 0.
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> acc;
  // Means of per-replicate rates over replicates where each is defined.
  std::optional<double> mean_tpr;
  std::optional<double> mean_fpr;
  std::optional<double> mean_acc;
  double wall_seconds = 0.0;
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

ConfusionCounts confusion(const std::vector<bool>& flagged, const std::vector<bool>& truth);

// Fills tpr/fpr/acc from the pooled counts.
void finalize_rates(ClassificationReport& report);

// Per replicate: generate a labelled pattern, run the local test, and compare
// the per-point reject flags with the truth flags.
ClassificationReport run_classification(const ScenarioSpec& scenario, Hypothesis h,
                                        std::size_t replicates, const TestConfig& test,
                                        std::uint64_t seed);

struct KsResult {
  double d = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

// Two-sided two-sample Kolmogorov-Smirnov test. D is exact; the p-value uses
// the asymptotic Kolmogorov distribution at sqrt(n1 n2 / (n1 + n2)) * D.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// P(K > x) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double x);

// Designs of the simulation study.
//
// Global cells: H1 and H3 use homogeneous Poisson locations with
// lambda = E[N]; H2 uses the linear inhomogeneous process with
// alpha = 2 (E[N] - 10). Marks are boundary distance to the power h.
ScenarioSpec global_design(Hypothesis h, double expected_n, double mark_power);

// Local designs, E[N] points in the unit square:
//   H1L  Thomas superposition, cluster marks N(5, 1), background Unif(0, 1)
//   H2L  Thomas superposition, i.i.d. Unif(0, 1) marks
//   H3L  homogeneous Poisson, 3 mark hotspots of radius 0.05 with N(5, 1) marks
ScenarioSpec local_design(Hypothesis h, double expected_n);

}  // namespace mwk
