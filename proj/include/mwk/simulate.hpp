#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mwk/core.hpp"
#include "mwk/rng.hpp"

namespace mwk {

// A pattern together with per-point ground truth (membership in a planted
// cluster or mark hotspot). Used only for evaluation.
struct LabeledPattern {
  MarkedPattern pattern;
  std::vector<bool> truth;
};

// ---- location generators (marks are set to 1) ----

// n i.i.d. uniform points in the window.
MarkedPattern gen_binomial(std::size_t n, const Window& w, Rng& rng);

// Homogeneous Poisson process with intensity `lambda` per unit area.
MarkedPattern gen_hom_poisson(double lambda, const Window& w, Rng& rng);
MarkedPattern gen_hom_poisson(double lambda, const Window& w, std::uint64_t seed);

// Poisson process on the unit square with intensity 10 + alpha * x, simulated
// by thinning a homogeneous process of rate 10 + max(alpha, 0).
MarkedPattern gen_inhom_poisson_linear(double alpha, const Window& w, Rng& rng);
MarkedPattern gen_inhom_poisson_linear(double alpha, const Window& w, std::uint64_t seed);

struct ThomasParams {
  double lambda_bg = 35.0;  // background Poisson intensity
  double kappa = 5.0;       // parent intensity
  double mu_off = 3.0;      // mean offspring per parent
  double sigma = 0.03;      // Gaussian displacement sd
};

// Homogeneous Poisson background superimposed with a Thomas cluster process.
// Parents are uniform in the window and not part of the output; offspring
// falling outside the window are discarded. Offspring are flagged true.
LabeledPattern gen_thomas_superposition(const ThomasParams& p, const Window& w, Rng& rng);
LabeledPattern gen_thomas_superposition(const ThomasParams& p, const Window& w,
                                        std::uint64_t seed);

// Thomas parameters giving 30% clustered points in expectation for a target
// total E[N] on window w: lambda_bg = 0.7 E[N]/|W|, kappa = 5/|W|,
// mu_off = 0.3 E[N] / 5.
ThomasParams thomas_for_expected(double expected_n, const Window& w);

// ---- mark schemes ----

// m(x_i) = d(x_i, boundary)^h
MarkedPattern assign_marks_boundary(const MarkedPattern& pat, double h);

// Picks k distinct centers uniformly among the points; every point within
// `radius` of a center (centers included) is flagged and gets a
// N(mu, sd^2) mark truncated to (0, inf); all others get Unif(0,1) marks.
LabeledPattern assign_marks_local_centers(const MarkedPattern& pat, std::size_t k, double radius,
                                          double mu, double sd, Rng& rng);

// Flagged points get N(mu, sd^2) marks truncated to (0, inf), the rest
// Unif(0,1).
MarkedPattern assign_marks_cluster_gaussian(const MarkedPattern& pat,
                                            const std::vector<bool>& truth, double mu, double sd,
                                            Rng& rng);

MarkedPattern assign_marks_uniform(const MarkedPattern& pat, Rng& rng);

// Marks drawn i.i.d. (with replacement) from `pool`.
MarkedPattern assign_marks_empirical(const MarkedPattern& pat, const std::vector<double>& pool,
                                     Rng& rng);

// Uniform random permutation of the existing marks. Needs n >= 2.
MarkedPattern permute_marks(const MarkedPattern& pat, Rng& rng);
MarkedPattern permute_marks(const MarkedPattern& pat, std::uint64_t seed);

// Sorted `marks` placed on the points of `pat` in order of increasing boundary
// distance (ties by index), so the smallest mark sits nearest the edge.
MarkedPattern transfer_marks_by_boundary_rank(const MarkedPattern& pat,
                                              std::vector<double> marks);

// ---- declarative scenarios ----

struct HomPoisson {
  double lambda = 100.0;
};
struct InhomPoissonLinear {
  double alpha = 180.0;
};
struct ThomasSuperposition {
  ThomasParams params;
};
struct BinomialFixedN {
  std::size_t n = 100;
};
using Generator = std::variant<HomPoisson, InhomPoissonLinear, ThomasSuperposition, BinomialFixedN>;

struct BoundaryPower {
  double h = 1.0;
};
struct IidUniform01 {};
struct LocalGaussianCenters {
  std::size_t k = 3;
  double radius = 0.05;
  double mu = 5.0;
  double sd = 1.0;
};
struct ClusterGaussianMarks {
  double mu = 5.0;
  double sd = 1.0;
};
struct IidEmpirical {
  std::vector<double> pool;
};
struct Permutation {
  std::vector<double> marks;
};
using MarkScheme = std::variant<BoundaryPower, IidUniform01, LocalGaussianCenters,
                                ClusterGaussianMarks, IidEmpirical, Permutation>;

struct ScenarioSpec {
  Generator generator = HomPoisson{};
  MarkScheme marks = IidUniform01{};
  Window window = Window::unit_square();
};

// Throws ValidationError naming the offending parameter.
void validate(const ScenarioSpec& spec);

// Realizes the scenario; a pure function of (spec, seed). Truth flags come
// from the generator (cluster offspring) or the mark scheme (hotspot members),
// whichever plants structure; otherwise all false.
LabeledPattern generate(const ScenarioSpec& spec, std::uint64_t seed);

// One-line human readable description, e.g. "hom_poisson(lambda=100)+boundary_power(h=2)".
std::string describe(const ScenarioSpec& spec);

}  // namespace mwk
