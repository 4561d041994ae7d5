#include "mwk/config.hpp"

#include <algorithm>
#include <initializer_list>
#include <string_view>

namespace mwk {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void reject_unknown(const Json& j, std::initializer_list<std::string_view> allowed,
                    std::string_view context) {
  if (!j.is_object()) throw ValidationError(std::string(context) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("unknown key '" + key + "' in " + std::string(context));
    }
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("config key '") + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> get_opt(const Json& j, const char* key, std::optional<T> fallback = {}) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (it->is_null()) return std::nullopt;
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("config key '") + key + "' has the wrong type");
  }
}

template <class T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

double require_number(const Json& j, const char* key, std::string_view context) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw ValidationError(std::string(context) + " needs numeric parameter '" + key + "'");
  }
  return it->get<double>();
}

Json test_fields(const TestConfig& c) {
  Json j;
  j["replicates"] = c.replicates;
  j["alpha"] = c.alpha;
  j["grid_size"] = c.grid_size;
  j["rmax"] = opt_json(c.rmax);
  j["intensity"] = std::string(to_string(c.intensity));
  j["bandwidth"] = opt_json(c.bandwidth);
  j["kappa_bandwidth"] = opt_json(c.kappa_bandwidth);
  return j;
}

TestConfig test_fields_from(const Json& j, TestConfig c = {}) {
  c.replicates = get_or<std::size_t>(j, "replicates", c.replicates);
  c.alpha = get_or<double>(j, "alpha", c.alpha);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.grid_size = get_or<std::size_t>(j, "grid_size", c.grid_size);
  c.rmax = get_opt<double>(j, "rmax", c.rmax);
  c.intensity = parse_intensity_kind(get_or<std::string>(j, "intensity",
                                                         std::string(to_string(c.intensity))));
  c.bandwidth = get_opt<double>(j, "bandwidth", c.bandwidth);
  c.kappa_bandwidth = get_opt<double>(j, "kappa_bandwidth", c.kappa_bandwidth);
  return c;
}

std::vector<std::string_view> with_keys(std::initializer_list<std::string_view> extra) {
  std::vector<std::string_view> all{"replicates", "alpha",     "seed",
                                    "grid_size",  "rmax",      "intensity",
                                    "bandwidth",  "kappa_bandwidth"};
  all.insert(all.end(), extra.begin(), extra.end());
  return all;
}

void reject_unknown(const Json& j, const std::vector<std::string_view>& allowed,
                    std::string_view context) {
  if (!j.is_object()) throw ValidationError(std::string(context) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("unknown key '" + key + "' in " + std::string(context));
    }
  }
}

void check_hypotheses(const std::vector<std::string>& names, bool local) {
  if (names.empty()) throw ValidationError("no hypotheses selected");
  for (const auto& n : names) {
    const Hypothesis h = parse_hypothesis(n);
    if (is_local(h) != local) {
      throw ValidationError("hypothesis " + n + (local ? " is not local" : " is local") +
                            " in this command");
    }
  }
}

}  // namespace

Json to_json(const Window& w) {
  return Json{{"xmin", w.xmin()}, {"xmax", w.xmax()}, {"ymin", w.ymin()}, {"ymax", w.ymax()}};
}

Window window_from_json(const Json& j) {
  reject_unknown(j, {"xmin", "xmax", "ymin", "ymax"}, "window");
  return Window(require_number(j, "xmin", "window"), require_number(j, "xmax", "window"),
                require_number(j, "ymin", "window"), require_number(j, "ymax", "window"));
}

Json to_json(const ScenarioSpec& s) {
  Json gen = std::visit(
      Overloaded{
          [](const HomPoisson& g) { return Json{{"type", "hom_poisson"}, {"lambda", g.lambda}}; },
          [](const InhomPoissonLinear& g) {
            return Json{{"type", "inhom_poisson_linear"}, {"alpha", g.alpha}};
          },
          [](const ThomasSuperposition& g) {
            return Json{{"type", "thomas_superposition"},
                        {"lambda_bg", g.params.lambda_bg},
                        {"kappa", g.params.kappa},
                        {"mu_off", g.params.mu_off},
                        {"sigma", g.params.sigma}};
          },
          [](const BinomialFixedN& g) { return Json{{"type", "binomial"}, {"n", g.n}}; },
      },
      s.generator);
  Json marks = std::visit(
      Overloaded{
          [](const BoundaryPower& m) { return Json{{"type", "boundary_power"}, {"h", m.h}}; },
          [](const IidUniform01&) { return Json{{"type", "iid_uniform01"}}; },
          [](const LocalGaussianCenters& m) {
            return Json{{"type", "local_gaussian_centers"},
                        {"k", m.k},
                        {"radius", m.radius},
                        {"mu", m.mu},
                        {"sd", m.sd}};
          },
          [](const ClusterGaussianMarks& m) {
            return Json{{"type", "cluster_gaussian"}, {"mu", m.mu}, {"sd", m.sd}};
          },
          [](const IidEmpirical& m) { return Json{{"type", "iid_empirical"}, {"pool", m.pool}}; },
          [](const Permutation& m) { return Json{{"type", "permutation"}, {"marks", m.marks}}; },
      },
      s.marks);
  return Json{{"generator", gen}, {"marks", marks}, {"window", to_json(s.window)}};
}

ScenarioSpec scenario_from_json(const Json& j) {
  reject_unknown(j, {"generator", "marks", "window"}, "scenario");
  ScenarioSpec s;
  if (j.contains("window")) s.window = window_from_json(j.at("window"));

  const Json gen = j.value("generator", Json{{"type", "hom_poisson"}});
  const std::string gtype = get_or<std::string>(gen, "type", "");
  if (gtype == "hom_poisson") {
    reject_unknown(gen, {"type", "lambda"}, "hom_poisson generator");
    s.generator = HomPoisson{require_number(gen, "lambda", "hom_poisson")};
  } else if (gtype == "inhom_poisson_linear") {
    reject_unknown(gen, {"type", "alpha"}, "inhom_poisson_linear generator");
    s.generator = InhomPoissonLinear{require_number(gen, "alpha", "inhom_poisson_linear")};
  } else if (gtype == "thomas_superposition") {
    reject_unknown(gen, {"type", "expected_n", "lambda_bg", "kappa", "mu_off", "sigma"},
                   "thomas_superposition generator");
    ThomasParams p;
    if (gen.contains("expected_n")) {
      p = thomas_for_expected(require_number(gen, "expected_n", "thomas_superposition"),
                              s.window);
    }
    p.lambda_bg = get_or<double>(gen, "lambda_bg", p.lambda_bg);
    p.kappa = get_or<double>(gen, "kappa", p.kappa);
    p.mu_off = get_or<double>(gen, "mu_off", p.mu_off);
    p.sigma = get_or<double>(gen, "sigma", p.sigma);
    s.generator = ThomasSuperposition{p};
  } else if (gtype == "binomial") {
    reject_unknown(gen, {"type", "n"}, "binomial generator");
    s.generator = BinomialFixedN{get_or<std::size_t>(gen, "n", 100)};
  } else {
    throw ValidationError("unknown generator type '" + gtype + "'");
  }

  const Json marks = j.value("marks", Json{{"type", "iid_uniform01"}});
  const std::string mtype = get_or<std::string>(marks, "type", "");
  if (mtype == "boundary_power") {
    reject_unknown(marks, {"type", "h"}, "boundary_power marks");
    s.marks = BoundaryPower{require_number(marks, "h", "boundary_power")};
  } else if (mtype == "iid_uniform01") {
    reject_unknown(marks, {"type"}, "iid_uniform01 marks");
    s.marks = IidUniform01{};
  } else if (mtype == "local_gaussian_centers") {
    reject_unknown(marks, {"type", "k", "radius", "mu", "sd"}, "local_gaussian_centers marks");
    LocalGaussianCenters m;
    m.k = get_or<std::size_t>(marks, "k", m.k);
    m.radius = get_or<double>(marks, "radius", m.radius);
    m.mu = get_or<double>(marks, "mu", m.mu);
    m.sd = get_or<double>(marks, "sd", m.sd);
    s.marks = m;
  } else if (mtype == "cluster_gaussian") {
    reject_unknown(marks, {"type", "mu", "sd"}, "cluster_gaussian marks");
    ClusterGaussianMarks m;
    m.mu = get_or<double>(marks, "mu", m.mu);
    m.sd = get_or<double>(marks, "sd", m.sd);
    s.marks = m;
  } else if (mtype == "iid_empirical") {
    reject_unknown(marks, {"type", "pool"}, "iid_empirical marks");
    s.marks = IidEmpirical{get_or<std::vector<double>>(marks, "pool", {})};
  } else if (mtype == "permutation") {
    reject_unknown(marks, {"type", "marks"}, "permutation marks");
    s.marks = Permutation{get_or<std::vector<double>>(marks, "marks", {})};
  } else {
    throw ValidationError("unknown mark scheme '" + mtype + "'");
  }
  validate(s);
  return s;
}

Json to_json(const TestConfig& c) {
  Json j = test_fields(c);
  j["seed"] = c.seed;
  return j;
}

TestConfig test_config_from_json(const Json& j) {
  reject_unknown(j, with_keys({}), "test config");
  TestConfig c = test_fields_from(j);
  c.validate();
  return c;
}

Json to_json(const SimulateConfig& c) {
  return Json{{"scenario", to_json(c.scenario)}, {"seed", c.seed}};
}

SimulateConfig simulate_config_from_json(const Json& j) {
  reject_unknown(j, {"scenario", "seed"}, "simulate config");
  SimulateConfig c;
  if (j.contains("scenario")) c.scenario = scenario_from_json(j.at("scenario"));
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  return c;
}

Json to_json(const TestRunConfig& c) {
  Json j;
  j["input"] = c.input;
  j["window"] = c.window ? to_json(*c.window) : Json(nullptr);
  j["mark_column"] = c.mark_column;
  j["hypothesis"] = c.hypothesis;
  j["local"] = c.local;
  j["seed"] = c.test.seed;
  j.update(test_fields(c.test));
  return j;
}

TestRunConfig test_run_config_from_json(const Json& j) {
  reject_unknown(j, with_keys({"input", "window", "mark_column", "hypothesis", "local"}),
                 "test config");
  TestRunConfig c;
  c.input = get_or<std::string>(j, "input", c.input);
  if (j.contains("window") && !j.at("window").is_null()) c.window = window_from_json(j.at("window"));
  c.mark_column = get_or<std::string>(j, "mark_column", c.mark_column);
  c.hypothesis = get_or<std::string>(j, "hypothesis", c.hypothesis);
  c.local = get_or<bool>(j, "local", c.local);
  c.test = test_fields_from(j);
  if (c.hypothesis != "sequential") parse_hypothesis(c.hypothesis);
  c.test.validate();
  return c;
}

Json to_json(const PowerRunConfig& c) {
  Json j;
  j["hypotheses"] = c.hypotheses;
  j["expected_n"] = c.expected_n;
  j["h"] = c.mark_powers;
  j["scenario"] = c.scenario ? to_json(*c.scenario) : Json(nullptr);
  j["R"] = c.replicates;
  j["seed"] = c.test.seed;
  j.update(test_fields(c.test));
  return j;
}

PowerRunConfig power_run_config_from_json(const Json& j) {
  reject_unknown(j, with_keys({"hypotheses", "expected_n", "h", "scenario", "R"}), "power config");
  PowerRunConfig c;
  c.hypotheses = get_or<std::vector<std::string>>(j, "hypotheses", c.hypotheses);
  c.expected_n = get_or<std::vector<double>>(j, "expected_n", c.expected_n);
  c.mark_powers = get_or<std::vector<double>>(j, "h", c.mark_powers);
  if (j.contains("scenario") && !j.at("scenario").is_null()) {
    c.scenario = scenario_from_json(j.at("scenario"));
  }
  c.replicates = get_or<std::size_t>(j, "R", c.replicates);
  c.test = test_fields_from(j);
  check_hypotheses(c.hypotheses, false);
  if (c.replicates < 1) throw ValidationError("R must be at least 1");
  c.test.validate();
  return c;
}

Json to_json(const ClassifyRunConfig& c) {
  Json j;
  j["hypotheses"] = c.hypotheses;
  j["expected_n"] = c.expected_n;
  j["scenario"] = c.scenario ? to_json(*c.scenario) : Json(nullptr);
  j["R"] = c.replicates;
  j["seed"] = c.test.seed;
  j.update(test_fields(c.test));
  return j;
}

ClassifyRunConfig classify_run_config_from_json(const Json& j) {
  reject_unknown(j, with_keys({"hypotheses", "expected_n", "scenario", "R"}), "classify config");
  ClassifyRunConfig c;
  c.hypotheses = get_or<std::vector<std::string>>(j, "hypotheses", c.hypotheses);
  c.expected_n = get_or<std::vector<double>>(j, "expected_n", c.expected_n);
  if (j.contains("scenario") && !j.at("scenario").is_null()) {
    c.scenario = scenario_from_json(j.at("scenario"));
  }
  c.replicates = get_or<std::size_t>(j, "R", c.replicates);
  c.test = test_fields_from(j);
  check_hypotheses(c.hypotheses, true);
  if (c.replicates < 1) throw ValidationError("R must be at least 1");
  c.test.validate();
  return c;
}

Json to_json(const KsRunConfig& c) {
  return Json{{"input", c.input}, {"group", c.group}, {"variables", c.variables}};
}

KsRunConfig ks_run_config_from_json(const Json& j) {
  reject_unknown(j, {"input", "group", "variables"}, "ks config");
  KsRunConfig c;
  c.input = get_or<std::string>(j, "input", c.input);
  c.group = get_or<std::string>(j, "group", c.group);
  c.variables = get_or<std::vector<std::string>>(j, "variables", c.variables);
  if (c.variables.empty()) throw ValidationError("no variables selected for the KS test");
  return c;
}

Json config_section(const Json& doc) {
  if (doc.is_object() && doc.contains("config") && doc.contains("command")) return doc.at("config");
  return doc;
}

Json to_json(const TestResult& r) {
  Json j;
  j["hypothesis"] = std::string(to_string(r.hypothesis));
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["reject"] = r.reject;
  j["alpha"] = r.alpha;
  j["seed"] = r.seed;
  j["replicates"] = r.null_sample.size();
  j["null_sample"] = r.null_sample;
  return j;
}

Json to_json(const LocalTestResult& r) {
  Json j;
  j["hypothesis"] = std::string(to_string(r.hypothesis));
  j["alpha"] = r.alpha;
  j["seed"] = r.seed;
  j["pool_size"] = r.pool_size;
  j["null_pool"] = "local statistics of all points in all null replicates";
  j["n"] = r.statistics.size();
  j["rejected"] = r.rejected_count();
  j["rejected_fraction"] =
      r.statistics.empty() ? 0.0
                           : static_cast<double>(r.rejected_count()) /
                                 static_cast<double>(r.statistics.size());
  j["statistics"] = r.statistics;
  j["p_values"] = r.p_values;
  std::vector<int> flags(r.reject.begin(), r.reject.end());
  j["reject"] = flags;
  return j;
}

Json to_json(const SequentialOutcome& o) {
  Json j;
  j["label"] = std::string(to_string(o.label));
  j["inconclusive"] = o.inconclusive;
  j["H1"] = to_json(o.h1);
  j["H2"] = o.h2 ? to_json(*o.h2) : Json(nullptr);
  j["H3"] = o.h3 ? to_json(*o.h3) : Json(nullptr);
  return j;
}

Json to_json(const PowerReport& r, bool with_timing) {
  Json j;
  j["scenario"] = r.scenario;
  j["hypothesis"] = std::string(to_string(r.hypothesis));
  j["R"] = r.replicates;
  j["rejections"] = r.rejections;
  j["skipped"] = r.skipped;
  j["power"] = r.power;
  if (with_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

Json to_json(const ClassificationReport& r, bool with_timing) {
  Json j;
  j["scenario"] = r.scenario;
  j["hypothesis"] = std::string(to_string(r.hypothesis));
  j["R"] = r.replicates;
  j["TP"] = r.tp;
  j["FP"] = r.fp;
  j["TN"] = r.tn;
  j["FN"] = r.fn;
  j["TPR"] = opt_json(r.tpr);
  j["FPR"] = opt_json(r.fpr);
  j["ACC"] = opt_json(r.acc);
  j["mean_per_replicate"] = Json{
      {"TPR", opt_json(r.mean_tpr)}, {"FPR", opt_json(r.mean_fpr)}, {"ACC", opt_json(r.mean_acc)}};
  if (with_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

Json to_json(const KsResult& r) {
  return Json{{"D", r.d}, {"p_value", r.p_value}, {"n1", r.n1}, {"n2", r.n2}};
}

}  // namespace mwk
