// Command-line front end: simulate, test, power, classify, ks.
//
// Each command builds a JSON config from an optional --config file and then
// applies flags on top; the parsed config is re-serialized in canonical form
// and echoed into the output document, so `--config out.json` reruns a
// command exactly.

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mwk/config.hpp"
#include "mwk/experiments.hpp"
#include "mwk/hypothesis_tests.hpp"
#include "mwk/io.hpp"
#include "mwk/kernels.hpp"
#include "mwk/rng.hpp"
#include "mwk/simulate.hpp"
#include "mwk/summaries.hpp"

namespace fs = std::filesystem;
using mwk::Json;

namespace {

struct Common {
  std::string config_path;
  std::string output;
  int threads = 0;
  bool timing = false;
};

// Flags that override config keys. Only flags given on the command line are
// collected, so config-file values survive otherwise.
struct Overrides {
  struct Entry {
    CLI::Option* option;
    std::string key;
    std::function<Json(const CLI::Option*)> value;
  };
  std::vector<Entry> entries;

  template <class T>
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    entries.push_back({app->add_option(flag, help), key,
                       [](const CLI::Option* o) { return Json(o->as<T>()); }});
  }

  template <class T>
  void add_list(CLI::App* app, const std::string& flag, const std::string& key,
                const std::string& help) {
    CLI::Option* o = app->add_option(flag, help)->delimiter(',')->expected(1, -1);
    entries.push_back({o, key, [](const CLI::Option* o) { return Json(o->as<std::vector<T>>()); }});
  }

  Json collect() const {
    Json values = Json::object();
    for (const auto& e : entries) {
      if (e.option->count() > 0) values[e.key] = e.value(e.option);
    }
    return values;
  }
};

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw mwk::ValidationError("cannot open config '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw mwk::ValidationError("config '" + path + "': " + e.what());
  }
  return mwk::config_section(doc);
}

Json merged(const Common& common, const Overrides& over) {
  Json j = load_config(common.config_path);
  if (!j.is_object()) throw mwk::ValidationError("config must be a JSON object");
  Json values = over.collect();
  // --window is given as a list but stored as an object.
  if (values.contains("window_list")) {
    const auto w = values["window_list"].get<std::vector<double>>();
    if (w.size() != 4) throw mwk::ValidationError("--window needs xmin,xmax,ymin,ymax");
    values.erase("window_list");
    values["window"] = mwk::to_json(mwk::Window(w[0], w[1], w[2], w[3]));
  }
  for (const auto& [k, v] : values.items()) j[k] = v;
  return j;
}

void emit(const Common& common, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (common.output.empty() || common.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(common.output, std::ios::binary);
  if (!out) throw mwk::ValidationError("cannot write '" + common.output + "'");
  out << text;
}

Json document(const char* command, const Json& config, Json result) {
  Json doc;
  doc["command"] = command;
  doc["config"] = config;
  doc["result"] = std::move(result);
  return doc;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mwk::ValidationError("cannot write '" + path + "'");
  return out;
}

// Appends to a table file, writing the header first if the file is new or empty.
std::ofstream open_table(const std::string& path, const std::string& header) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw mwk::ValidationError("cannot write '" + path + "'");
  if (fresh) out << header << '\n';
  return out;
}

std::string fixed2(std::optional<double> v) {
  if (!v) return "NA";
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

std::string short_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void add_test_flags(CLI::App* app, Overrides& over) {
  over.add<std::size_t>(app, "-B,--replicates", "replicates", "Null replicates per test");
  over.add<double>(app, "--alpha", "alpha", "Significance level");
  over.add<std::uint64_t>(app, "--seed", "seed", "Base seed");
  over.add<std::size_t>(app, "--grid-size", "grid_size", "Number of r values");
  over.add<double>(app, "--rmax", "rmax", "Largest r (default 0.25 x shorter side)");
  over.add<std::string>(app, "--intensity", "intensity", "constant | kernel");
  over.add<double>(app, "--bandwidth", "bandwidth", "Kernel intensity bandwidth");
  over.add<double>(app, "--kappa-bandwidth", "kappa_bandwidth",
                   "Smoothing half-width for the mark correlation");
}

// ---- simulate ----

struct SimulateArgs {
  std::string csv;
  std::string design;
  double expected_n = 100.0;
  double h = 1.0;
};

int run_simulate(const Common& common, const Overrides& over, const SimulateArgs& args) {
  Json j = merged(common, over);
  if (!args.design.empty()) {
    const mwk::Hypothesis h = mwk::parse_hypothesis(args.design);
    const mwk::ScenarioSpec s = mwk::is_local(h) ? mwk::local_design(h, args.expected_n)
                                                 : mwk::global_design(h, args.expected_n, args.h);
    j["scenario"] = mwk::to_json(s);
  }
  const mwk::SimulateConfig cfg = mwk::simulate_config_from_json(j);
  const mwk::LabeledPattern lp = mwk::generate(cfg.scenario, cfg.seed);
  const bool labeled = std::find(lp.truth.begin(), lp.truth.end(), true) != lp.truth.end() ||
                       std::holds_alternative<mwk::ThomasSuperposition>(cfg.scenario.generator) ||
                       std::holds_alternative<mwk::LocalGaussianCenters>(cfg.scenario.marks) ||
                       std::holds_alternative<mwk::ClusterGaussianMarks>(cfg.scenario.marks);
  if (args.csv.empty() || args.csv == "-") {
    mwk::write_pattern_csv(std::cout, lp.pattern, labeled ? &lp.truth : nullptr);
  } else {
    auto out = open_out(args.csv);
    mwk::write_pattern_csv(out, lp.pattern, labeled ? &lp.truth : nullptr);
  }
  if (!common.output.empty()) {
    std::size_t flagged = 0;
    for (bool t : lp.truth) flagged += t ? 1 : 0;
    Json result;
    result["description"] = mwk::describe(cfg.scenario);
    result["n"] = lp.pattern.size();
    result["truth_column"] = labeled;
    result["flagged"] = flagged;
    emit(common, document("simulate", mwk::to_json(cfg), result));
  }
  return 0;
}

// ---- test ----

struct TestArgs {
  std::string local_csv;
  std::string curves_dir;
};

void write_curves(const std::string& dir, const mwk::MarkedPattern& pat, const mwk::TestConfig& t,
                  const Json& config) {
  fs::create_directories(dir);
  const mwk::RGrid grid = t.grid_for(pat.window());
  const auto intensity = mwk::estimate_intensity(pat, t.intensity, t.bandwidth);
  const mwk::SummaryCurve k = mwk::k_hat(pat, grid);
  const mwk::SummaryCurve ktf = mwk::ktf_hat(pat, grid, intensity);
  const mwk::SummaryCurve kappa = mwk::kappa_tf_hat(pat, grid, t.kappa_bandwidth);
  const mwk::SummaryCurve r1 = mwk::reference_curve(pat, grid, mwk::Hypothesis::H1, t);
  const mwk::SummaryCurve r2 = mwk::reference_curve(pat, grid, mwk::Hypothesis::H2, t);
  const mwk::SummaryCurve r3 = mwk::reference_curve(pat, grid, mwk::Hypothesis::H3, t);
  {
    auto out = open_out((fs::path(dir) / "curves.csv").string());
    mwk::write_curves_csv(out, {{"K", &k},
                                {"Ktf", &ktf},
                                {"kappa_tf", &kappa},
                                {"ref_H1", &r1},
                                {"ref_H2", &r2},
                                {"ref_H3", &r3}});
  }
  Json manifest;
  manifest["file"] = "curves.csv";
  manifest["columns"] = {{"r", "distance"},
                         {"K", "unmarked K"},
                         {"Ktf", "mark-weighted K"},
                         {"kappa_tf", "mark correlation"},
                         {"ref_H1", "pi r^2"},
                         {"ref_H2", "pi r^2 kappa_tf"},
                         {"ref_H3", "K of the observed locations"}};
  manifest["config"] = config;
  auto out = open_out((fs::path(dir) / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

void write_local_csv(const std::string& path, const mwk::MarkedPattern& pat,
                     const mwk::LocalTestResult& r) {
  auto out = open_out(path);
  out << "x,y,mark,T,p,reject\n";
  for (std::size_t i = 0; i < pat.size(); ++i) {
    const mwk::Point p = pat.point(i);
    out << mwk::format_double(p.x) << ',' << mwk::format_double(p.y) << ','
        << mwk::format_double(pat.mark(i)) << ',' << mwk::format_double(r.statistics[i]) << ','
        << mwk::format_double(r.p_values[i]) << ',' << (r.reject[i] ? 1 : 0) << '\n';
  }
}

int run_test(const Common& common, const Overrides& over, const TestArgs& args) {
  Json j = merged(common, over);
  if (!args.local_csv.empty()) j["local"] = true;
  const mwk::TestRunConfig cfg = mwk::test_run_config_from_json(j);
  if (cfg.input.empty()) throw mwk::ValidationError("no input file given");
  const Json config = mwk::to_json(cfg);

  const mwk::PatternTable table = mwk::read_pattern_csv(cfg.input, cfg.window, cfg.mark_column);
  const mwk::MarkedPattern& pat = table.pattern;
  if (pat.size() < 2) {
    throw mwk::ValidationError("the pattern has " + std::to_string(pat.size()) +
                               " point(s); at least 2 are needed");
  }

  Json result;
  result["n"] = pat.size();
  result["window"] = mwk::to_json(pat.window());

  std::optional<mwk::Hypothesis> local_h;
  if (cfg.hypothesis == "sequential") {
    result["sequential"] = mwk::to_json(mwk::sequential_procedure(pat, cfg.test));
    if (cfg.local) local_h = mwk::Hypothesis::H1L;
  } else {
    const mwk::Hypothesis h = mwk::parse_hypothesis(cfg.hypothesis);
    if (mwk::is_local(h)) {
      local_h = h;
    } else {
      result["global"] = mwk::to_json(mwk::global_test(pat, h, cfg.test));
      if (cfg.local) local_h = mwk::local_counterpart(h);
    }
  }
  if (local_h) {
    const mwk::LocalTestResult lr = mwk::local_test(pat, *local_h, cfg.test);
    result["local"] = mwk::to_json(lr);
    if (!args.local_csv.empty()) write_local_csv(args.local_csv, pat, lr);
  }
  if (!args.curves_dir.empty()) write_curves(args.curves_dir, pat, cfg.test, config);
  emit(common, document("test", config, result));
  return 0;
}

// ---- power ----

std::uint64_t cell_seed(std::uint64_t seed, mwk::Hypothesis h, double expected_n, double power) {
  return mwk::derive_seed(seed, {static_cast<std::uint64_t>(h), std::bit_cast<std::uint64_t>(expected_n),
                                 std::bit_cast<std::uint64_t>(power)});
}

int run_power_cmd(const Common& common, const Overrides& over, const std::string& table_path) {
  const mwk::PowerRunConfig cfg = mwk::power_run_config_from_json(merged(common, over));
  const Json config = mwk::to_json(cfg);
  std::vector<mwk::Hypothesis> hyps;
  for (const auto& name : cfg.hypotheses) hyps.push_back(mwk::parse_hypothesis(name));

  Json reports = Json::array();
  std::vector<std::string> rows;
  const auto row_for = [&](const std::string& lead, const std::map<mwk::Hypothesis, double>& p) {
    std::string row = lead;
    for (mwk::Hypothesis h : {mwk::Hypothesis::H1, mwk::Hypothesis::H2, mwk::Hypothesis::H3}) {
      const auto it = p.find(h);
      row += ',' + (it == p.end() ? std::string() : fixed2(it->second));
    }
    return row;
  };

  if (cfg.scenario) {
    std::map<mwk::Hypothesis, double> powers;
    for (mwk::Hypothesis h : hyps) {
      const auto rep = mwk::run_power(*cfg.scenario, h, cfg.replicates, cfg.test,
                                      mwk::derive_seed(cfg.test.seed, {static_cast<std::uint64_t>(h)}));
      reports.push_back(mwk::to_json(rep, common.timing));
      powers[h] = rep.power;
    }
    rows.push_back(row_for("custom,", powers));
  } else {
    for (double e : cfg.expected_n) {
      for (double hp : cfg.mark_powers) {
        std::map<mwk::Hypothesis, double> powers;
        for (mwk::Hypothesis h : hyps) {
          auto rep = mwk::run_power(mwk::global_design(h, e, hp), h, cfg.replicates, cfg.test,
                                    cell_seed(cfg.test.seed, h, e, hp));
          Json jr = mwk::to_json(rep, common.timing);
          jr["expected_n"] = e;
          jr["h"] = hp;
          reports.push_back(std::move(jr));
          powers[h] = rep.power;
        }
        rows.push_back(row_for(short_number(e) + ',' + short_number(hp), powers));
      }
    }
  }
  if (!table_path.empty()) {
    auto out = open_table(table_path, "E[N],h,H1,H2,H3");
    for (const auto& row : rows) out << row << '\n';
  }
  emit(common, document("power", config, Json{{"reports", reports}}));
  return 0;
}

// ---- classify ----

int run_classify_cmd(const Common& common, const Overrides& over, const std::string& table_path) {
  const mwk::ClassifyRunConfig cfg = mwk::classify_run_config_from_json(merged(common, over));
  const Json config = mwk::to_json(cfg);
  std::vector<mwk::Hypothesis> hyps;
  for (const auto& name : cfg.hypotheses) hyps.push_back(mwk::parse_hypothesis(name));

  Json reports = Json::array();
  std::vector<std::string> rows;
  const auto rows_for = [&](const std::string& lead,
                            const std::map<mwk::Hypothesis, mwk::ClassificationReport>& reps) {
    using Member = std::optional<double> mwk::ClassificationReport::*;
    const std::pair<const char*, Member> metrics[] = {{"TPR", &mwk::ClassificationReport::tpr},
                                                      {"FPR", &mwk::ClassificationReport::fpr},
                                                      {"ACC", &mwk::ClassificationReport::acc}};
    for (const auto& [name, member] : metrics) {
      std::string row = lead + ',' + name;
      for (mwk::Hypothesis h :
           {mwk::Hypothesis::H1L, mwk::Hypothesis::H2L, mwk::Hypothesis::H3L}) {
        const auto it = reps.find(h);
        row += ',' + (it == reps.end() ? std::string() : fixed2(it->second.*member));
      }
      rows.push_back(row);
    }
  };

  if (cfg.scenario) {
    std::map<mwk::Hypothesis, mwk::ClassificationReport> reps;
    for (mwk::Hypothesis h : hyps) {
      auto rep = mwk::run_classification(*cfg.scenario, h, cfg.replicates, cfg.test,
                                         mwk::derive_seed(cfg.test.seed, {static_cast<std::uint64_t>(h)}));
      reports.push_back(mwk::to_json(rep, common.timing));
      reps[h] = rep;
    }
    rows_for("custom", reps);
  } else {
    for (double e : cfg.expected_n) {
      std::map<mwk::Hypothesis, mwk::ClassificationReport> reps;
      for (mwk::Hypothesis h : hyps) {
        auto rep = mwk::run_classification(mwk::local_design(h, e), h, cfg.replicates, cfg.test,
                                           cell_seed(cfg.test.seed, h, e, 0.0));
        Json jr = mwk::to_json(rep, common.timing);
        jr["expected_n"] = e;
        reports.push_back(std::move(jr));
        reps[h] = rep;
      }
      rows_for(short_number(e), reps);
    }
  }
  if (!table_path.empty()) {
    auto out = open_table(table_path, "E[N],metric,H1L,H2L,H3L");
    for (const auto& row : rows) out << row << '\n';
  }
  emit(common, document("classify", config, Json{{"reports", reports}}));
  return 0;
}

// ---- ks ----

int run_ks_cmd(const Common& common, const Overrides& over) {
  const mwk::KsRunConfig cfg = mwk::ks_run_config_from_json(merged(common, over));
  if (cfg.input.empty()) throw mwk::ValidationError("no input file given");
  const mwk::NumericTable table = mwk::read_numeric_csv(cfg.input);
  const std::vector<double>& group = table.column(cfg.group);
  for (double g : group) {
    if (g != 0.0 && g != 1.0) {
      throw mwk::ValidationError("group column '" + cfg.group + "' must contain only 0 and 1");
    }
  }
  Json result = Json::object();
  result["group"] = cfg.group;
  Json tests = Json::object();
  for (const auto& var : cfg.variables) {
    const std::vector<double>& v = table.column(var);
    std::vector<double> a, b;
    for (std::size_t i = 0; i < v.size(); ++i) (group[i] == 1.0 ? a : b).push_back(v[i]);
    if (a.empty() || b.empty()) {
      throw mwk::ValidationError("group column '" + cfg.group + "' has an empty group");
    }
    tests[var] = mwk::to_json(mwk::ks_two_sample(a, b));
  }
  result["tests"] = tests;
  emit(common, document("ks", mwk::to_json(cfg), result));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mark-weighted K-function estimators and Monte Carlo tests for marked point patterns"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (default: all cores)")
      ->check(CLI::NonNegativeNumber);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path,
                    "JSON config, or an earlier output document to rerun");
    sub->add_option("-o,--output", common.output, "Output JSON path (default stdout)");
    sub->add_option("--threads", common.threads, "Worker threads (default: all cores)")
        ->check(CLI::NonNegativeNumber);
  };

  // simulate
  Overrides sim_over;
  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Generate a marked pattern from a scenario");
  add_common(sim);
  sim->add_option("--csv", sim_args.csv, "Pattern CSV path (default stdout)");
  sim_over.add<std::uint64_t>(sim, "--seed", "seed", "Seed");
  sim->add_option("--design", sim_args.design,
                  "Use a simulation-study design: H1, H2, H3 (with --expected-n, --mark-power) or "
                  "H1L, H2L, H3L (with --expected-n)");
  sim->add_option("--expected-n", sim_args.expected_n, "Expected number of points for --design");
  sim->add_option("--mark-power", sim_args.h, "Mark power for --design");

  // test
  Overrides test_over;
  TestArgs test_args;
  auto* test = app.add_subcommand("test", "Run the sequential procedure or a single test");
  add_common(test);
  test_over.add<std::string>(test, "input", "input", "Pattern CSV with x,y,mark columns");
  test_over.add<std::string>(test, "--hypothesis", "hypothesis",
                             "sequential | H1 | H2 | H3 | H1L | H2L | H3L");
  test_over.add<std::string>(test, "--mark-column", "mark_column", "Name of the mark column");
  test_over.add_list<double>(test, "--window", "window_list", "xmin,xmax,ymin,ymax");
  add_test_flags(test, test_over);
  test->add_option("--local", test_args.local_csv,
                   "Also run the local test and write x,y,mark,T,p,reject to this CSV");
  test->add_option("--curves", test_args.curves_dir, "Directory for curve CSVs");

  // power
  Overrides pow_over;
  std::string pow_table;
  auto* pow = app.add_subcommand("power", "Power of the global tests over simulation cells");
  add_common(pow);
  pow_over.add_list<std::string>(pow, "--hypotheses", "hypotheses", "e.g. H1,H2,H3");
  pow_over.add_list<double>(pow, "--expected-n", "expected_n", "e.g. 25,50,100");
  pow_over.add_list<double>(pow, "--mark-power", "h", "Mark powers, e.g. 1,2,3");
  pow_over.add<std::size_t>(pow, "-R", "R", "Simulated patterns per cell");
  add_test_flags(pow, pow_over);
  pow->add_option("--table", pow_table, "Append E[N],h,H1,H2,H3 rows to this CSV");
  pow->add_flag("--timing", common.timing, "Include wall time in the report");

  // classify
  Overrides cls_over;
  std::string cls_table;
  auto* cls = app.add_subcommand("classify", "Classification rates of the local tests");
  add_common(cls);
  cls_over.add_list<std::string>(cls, "--hypotheses", "hypotheses", "e.g. H1L,H2L,H3L");
  cls_over.add_list<double>(cls, "--expected-n", "expected_n", "e.g. 25,50,100");
  cls_over.add<std::size_t>(cls, "-R", "R", "Simulated patterns per cell");
  add_test_flags(cls, cls_over);
  cls->add_option("--table", cls_table, "Append E[N],metric,H1L,H2L,H3L rows to this CSV");
  cls->add_flag("--timing", common.timing, "Include wall time in the report");

  // ks
  Overrides ks_over;
  auto* ks = app.add_subcommand("ks", "Two-sample KS comparison of columns between two groups");
  add_common(ks);
  ks_over.add<std::string>(ks, "input", "input", "CSV with a header row");
  ks_over.add<std::string>(ks, "--group", "group", "Binary 0/1 column (default reject)");
  ks_over.add_list<std::string>(ks, "--variables", "variables", "Columns to compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (common.threads > 0) mwk::kernels::set_threads(common.threads);
    if (sim->parsed()) return run_simulate(common, sim_over, sim_args);
    if (test->parsed()) return run_test(common, test_over, test_args);
    if (pow->parsed()) return run_power_cmd(common, pow_over, pow_table);
    if (cls->parsed()) return run_classify_cmd(common, cls_over, cls_table);
    if (ks->parsed()) return run_ks_cmd(common, ks_over);
  } catch (const mwk::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
