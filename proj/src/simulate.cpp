#include "mwk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mwk {
namespace {

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

void require(bool ok, const char* message) {
  if (!ok) throw ValidationError(message);
}

double truncated_normal(double mu, double sd, Rng& rng) {
  std::normal_distribution<double> normal(mu, sd);
  for (;;) {
    const double v = normal(rng);
    if (v > 0.0) return v;
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

MarkedPattern gen_binomial(std::size_t n, const Window& w, Rng& rng) {
  std::uniform_real_distribution<double> ux(w.xmin(), w.xmax());
  std::uniform_real_distribution<double> uy(w.ymin(), w.ymax());
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p.x = ux(rng);
    p.y = uy(rng);
  }
  return MarkedPattern(std::move(pts), ones(n), w);
}

MarkedPattern gen_hom_poisson(double lambda, const Window& w, Rng& rng) {
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
  std::poisson_distribution<std::size_t> count(lambda * w.area());
  return gen_binomial(count(rng), w, rng);
}

MarkedPattern gen_hom_poisson(double lambda, const Window& w, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return gen_hom_poisson(lambda, w, rng);
}

MarkedPattern gen_inhom_poisson_linear(double alpha, const Window& w, Rng& rng) {
  require(alpha > -10.0 && std::isfinite(alpha), "alpha must exceed -10");
  require(w == Window::unit_square(), "the linear intensity 10 + alpha x needs the unit square");
  const double lambda_max = 10.0 + std::max(alpha, 0.0);
  const MarkedPattern dominating = gen_hom_poisson(lambda_max, w, rng);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Point> kept;
  kept.reserve(dominating.size());
  for (const Point p : dominating.points()) {
    if (u01(rng) * lambda_max < 10.0 + alpha * p.x) kept.push_back(p);
  }
  const std::size_t n = kept.size();
  return MarkedPattern(std::move(kept), ones(n), w);
}

MarkedPattern gen_inhom_poisson_linear(double alpha, const Window& w, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return gen_inhom_poisson_linear(alpha, w, rng);
}

LabeledPattern gen_thomas_superposition(const ThomasParams& p, const Window& w, Rng& rng) {
  require(p.lambda_bg > 0.0, "lambda_bg must be positive");
  require(p.kappa > 0.0, "kappa must be positive");
  require(p.mu_off >= 0.0, "mu_off must be nonnegative");
  require(p.sigma > 0.0, "sigma must be positive");

  const MarkedPattern background = gen_hom_poisson(p.lambda_bg, w, rng);
  std::vector<Point> pts(background.points().begin(), background.points().end());
  std::vector<bool> truth(pts.size(), false);

  std::poisson_distribution<std::size_t> n_parents(p.kappa * w.area());
  std::uniform_real_distribution<double> ux(w.xmin(), w.xmax());
  std::uniform_real_distribution<double> uy(w.ymin(), w.ymax());
  std::normal_distribution<double> disp(0.0, p.sigma);
  const std::size_t parents = n_parents(rng);
  for (std::size_t c = 0; c < parents; ++c) {
    const Point parent{ux(rng), uy(rng)};
    std::size_t offspring = 0;
    if (p.mu_off > 0.0) {
      std::poisson_distribution<std::size_t> n_off(p.mu_off);
      offspring = n_off(rng);
    }
    for (std::size_t o = 0; o < offspring; ++o) {
      const Point child{parent.x + disp(rng), parent.y + disp(rng)};
      if (!w.contains(child)) continue;
      pts.push_back(child);
      truth.push_back(true);
    }
  }
  const std::size_t n = pts.size();
  return {MarkedPattern(std::move(pts), ones(n), w), std::move(truth)};
}

LabeledPattern gen_thomas_superposition(const ThomasParams& p, const Window& w,
                                        std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return gen_thomas_superposition(p, w, rng);
}

ThomasParams thomas_for_expected(double expected_n, const Window& w) {
  require(expected_n > 0.0, "expected_n must be positive");
  ThomasParams p;
  p.lambda_bg = 0.7 * expected_n / w.area();
  p.kappa = 5.0 / w.area();
  p.mu_off = 0.3 * expected_n / 5.0;
  p.sigma = 0.03;
  return p;
}

MarkedPattern assign_marks_boundary(const MarkedPattern& pat, double h) {
  require(h > 0.0 && std::isfinite(h), "h must be positive");
  std::vector<double> marks(pat.size());
  for (std::size_t i = 0; i < pat.size(); ++i) {
    marks[i] = std::pow(boundary_distance(pat.point(i), pat.window()), h);
  }
  return pat.with_marks(std::move(marks));
}

LabeledPattern assign_marks_local_centers(const MarkedPattern& pat, std::size_t k, double radius,
                                          double mu, double sd, Rng& rng) {
  require(k <= pat.size(), "k exceeds the number of points");
  require(radius > 0.0, "radius must be positive");
  require(sd > 0.0, "sd must be positive");
  const std::size_t n = pat.size();

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<std::size_t> centers;
  std::sample(idx.begin(), idx.end(), std::back_inserter(centers), k, rng);

  std::vector<bool> truth(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c : centers) {
      if (distance(pat.point(i), pat.point(c)) <= radius) {
        truth[i] = true;
        break;
      }
    }
  }
  return {assign_marks_cluster_gaussian(pat, truth, mu, sd, rng), std::move(truth)};
}

MarkedPattern assign_marks_cluster_gaussian(const MarkedPattern& pat,
                                            const std::vector<bool>& truth, double mu, double sd,
                                            Rng& rng) {
  require(truth.size() == pat.size(), "truth flags must match the point count");
  require(sd > 0.0, "sd must be positive");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> marks(pat.size());
  for (std::size_t i = 0; i < pat.size(); ++i) {
    marks[i] = truth[i] ? truncated_normal(mu, sd, rng) : u01(rng);
  }
  return pat.with_marks(std::move(marks));
}

MarkedPattern assign_marks_uniform(const MarkedPattern& pat, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> marks(pat.size());
  for (auto& m : marks) m = u01(rng);
  return pat.with_marks(std::move(marks));
}

MarkedPattern assign_marks_empirical(const MarkedPattern& pat, const std::vector<double>& pool,
                                     Rng& rng) {
  require(!pool.empty(), "empirical mark pool is empty");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<double> marks(pat.size());
  for (auto& m : marks) m = pool[pick(rng)];
  return pat.with_marks(std::move(marks));
}

MarkedPattern permute_marks(const MarkedPattern& pat, Rng& rng) {
  require(pat.size() >= 2, "permuting marks needs at least two points");
  std::vector<double> marks(pat.marks().begin(), pat.marks().end());
  std::shuffle(marks.begin(), marks.end(), rng);
  return pat.with_marks(std::move(marks));
}

MarkedPattern permute_marks(const MarkedPattern& pat, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return permute_marks(pat, rng);
}

MarkedPattern transfer_marks_by_boundary_rank(const MarkedPattern& pat,
                                              std::vector<double> marks) {
  require(marks.size() == pat.size(), "mark count must match the point count");
  const std::size_t n = pat.size();
  std::vector<double> bd(n);
  for (std::size_t i = 0; i < n; ++i) bd[i] = boundary_distance(pat.point(i), pat.window());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return bd[a] < bd[b]; });
  std::sort(marks.begin(), marks.end());
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) out[order[r]] = marks[r];
  return pat.with_marks(std::move(out));
}

void validate(const ScenarioSpec& spec) {
  std::visit(Overloaded{
                 [](const HomPoisson& g) { require(g.lambda > 0.0, "lambda must be positive"); },
                 [&](const InhomPoissonLinear& g) {
                   require(g.alpha > -10.0, "alpha must exceed -10");
                   require(spec.window == Window::unit_square(),
                           "the linear intensity 10 + alpha x needs the unit square");
                 },
                 [](const ThomasSuperposition& g) {
                   require(g.params.lambda_bg > 0.0, "lambda_bg must be positive");
                   require(g.params.kappa > 0.0, "kappa must be positive");
                   require(g.params.mu_off >= 0.0, "mu_off must be nonnegative");
                   require(g.params.sigma > 0.0, "sigma must be positive");
                 },
                 [](const BinomialFixedN&) {},
             },
             spec.generator);
  std::visit(Overloaded{
                 [](const BoundaryPower& m) { require(m.h > 0.0, "h must be positive"); },
                 [](const IidUniform01&) {},
                 [](const LocalGaussianCenters& m) {
                   require(m.radius > 0.0, "radius must be positive");
                   require(m.sd > 0.0, "sd must be positive");
                 },
                 [](const ClusterGaussianMarks& m) { require(m.sd > 0.0, "sd must be positive"); },
                 [](const IidEmpirical& m) { require(!m.pool.empty(), "pool must be nonempty"); },
                 [&](const Permutation& m) {
                   const auto* fixed = std::get_if<BinomialFixedN>(&spec.generator);
                   require(fixed != nullptr && fixed->n == m.marks.size(),
                           "permutation marks need a binomial generator with matching n");
                 },
             },
             spec.marks);
}

LabeledPattern generate(const ScenarioSpec& spec, std::uint64_t seed) {
  validate(spec);
  Rng loc_rng = make_rng(seed, {1});
  Rng mark_rng = make_rng(seed, {2});

  LabeledPattern base = std::visit(
      Overloaded{
          [&](const HomPoisson& g) {
            MarkedPattern p = gen_hom_poisson(g.lambda, spec.window, loc_rng);
            std::vector<bool> t(p.size(), false);
            return LabeledPattern{std::move(p), std::move(t)};
          },
          [&](const InhomPoissonLinear& g) {
            MarkedPattern p = gen_inhom_poisson_linear(g.alpha, spec.window, loc_rng);
            std::vector<bool> t(p.size(), false);
            return LabeledPattern{std::move(p), std::move(t)};
          },
          [&](const ThomasSuperposition& g) {
            return gen_thomas_superposition(g.params, spec.window, loc_rng);
          },
          [&](const BinomialFixedN& g) {
            MarkedPattern p = gen_binomial(g.n, spec.window, loc_rng);
            std::vector<bool> t(p.size(), false);
            return LabeledPattern{std::move(p), std::move(t)};
          },
      },
      spec.generator);

  return std::visit(
      Overloaded{
          [&](const BoundaryPower& m) {
            return LabeledPattern{assign_marks_boundary(base.pattern, m.h), base.truth};
          },
          [&](const IidUniform01&) {
            return LabeledPattern{assign_marks_uniform(base.pattern, mark_rng), base.truth};
          },
          [&](const LocalGaussianCenters& m) {
            const std::size_t k = std::min(m.k, base.pattern.size());
            return assign_marks_local_centers(base.pattern, k, m.radius, m.mu, m.sd, mark_rng);
          },
          [&](const ClusterGaussianMarks& m) {
            return LabeledPattern{
                assign_marks_cluster_gaussian(base.pattern, base.truth, m.mu, m.sd, mark_rng),
                base.truth};
          },
          [&](const IidEmpirical& m) {
            return LabeledPattern{assign_marks_empirical(base.pattern, m.pool, mark_rng),
                                  base.truth};
          },
          [&](const Permutation& m) {
            MarkedPattern p = base.pattern.with_marks(m.marks);
            return LabeledPattern{permute_marks(p, mark_rng), base.truth};
          },
      },
      spec.marks);
}

std::string describe(const ScenarioSpec& spec) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const HomPoisson& g) { os << "hom_poisson(lambda=" << g.lambda << ")"; },
                 [&](const InhomPoissonLinear& g) {
                   os << "inhom_poisson_linear(alpha=" << g.alpha << ")";
                 },
                 [&](const ThomasSuperposition& g) {
                   os << "thomas_superposition(lambda_bg=" << g.params.lambda_bg
                      << ",kappa=" << g.params.kappa << ",mu_off=" << g.params.mu_off
                      << ",sigma=" << g.params.sigma << ")";
                 },
                 [&](const BinomialFixedN& g) { os << "binomial(n=" << g.n << ")"; },
             },
             spec.generator);
  os << "+";
  std::visit(Overloaded{
                 [&](const BoundaryPower& m) { os << "boundary_power(h=" << m.h << ")"; },
                 [&](const IidUniform01&) { os << "iid_uniform01"; },
                 [&](const LocalGaussianCenters& m) {
                   os << "local_gaussian_centers(k=" << m.k << ",radius=" << m.radius
                      << ",mu=" << m.mu << ",sd=" << m.sd << ")";
                 },
                 [&](const ClusterGaussianMarks& m) {
                   os << "cluster_gaussian(mu=" << m.mu << ",sd=" << m.sd << ")";
                 },
                 [&](const IidEmpirical& m) { os << "iid_empirical(pool=" << m.pool.size() << ")"; },
                 [&](const Permutation& m) { os << "permutation(n=" << m.marks.size() << ")"; },
             },
             spec.marks);
  return os.str();
}

}  // namespace mwk
