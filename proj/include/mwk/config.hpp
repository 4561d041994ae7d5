#pragma once

// Run configurations for the command-line tools and JSON (de)serialization of
// configs, scenarios and results. Every output document embeds the effective
// config in canonical form, and reading that document back as a config
// reproduces the run.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mwk/experiments.hpp"
#include "mwk/hypothesis_tests.hpp"
#include "mwk/simulate.hpp"

namespace mwk {

using Json = nlohmann::ordered_json;

struct SimulateConfig {
  ScenarioSpec scenario;
  std::uint64_t seed = 1;
};

struct TestRunConfig {
  std::string input;
  std::optional<Window> window;
  std::string mark_column = "mark";
  std::string hypothesis = "sequential";  // sequential | H1 | H2 | H3 | H1L | H2L | H3L
  bool local = false;                     // also run the local variant
  TestConfig test;
};

// A grid of simulation-study cells, or a single custom scenario.
struct PowerRunConfig {
  std::vector<std::string> hypotheses{"H1"};
  std::vector<double> expected_n{25.0, 50.0, 100.0};
  std::vector<double> mark_powers{1.0, 2.0, 3.0};
  std::optional<ScenarioSpec> scenario;
  std::size_t replicates = 100;
  TestConfig test;
};

struct ClassifyRunConfig {
  std::vector<std::string> hypotheses{"H1L"};
  std::vector<double> expected_n{25.0, 50.0, 100.0};
  std::optional<ScenarioSpec> scenario;
  std::size_t replicates = 100;
  TestConfig test;
};

struct KsRunConfig {
  std::string input;
  std::string group = "reject";  // binary 0/1 column
  std::vector<std::string> variables{"x", "y"};
};

// ---- configs ----
Json to_json(const Window& w);
Window window_from_json(const Json& j);
Json to_json(const ScenarioSpec& s);
ScenarioSpec scenario_from_json(const Json& j);

// Canonical form: every field present, optionals as null. The test seed is
// written as the top-level "seed".
Json to_json(const TestConfig& c);
TestConfig test_config_from_json(const Json& j);

Json to_json(const SimulateConfig& c);
SimulateConfig simulate_config_from_json(const Json& j);
Json to_json(const TestRunConfig& c);
TestRunConfig test_run_config_from_json(const Json& j);
Json to_json(const PowerRunConfig& c);
PowerRunConfig power_run_config_from_json(const Json& j);
Json to_json(const ClassifyRunConfig& c);
ClassifyRunConfig classify_run_config_from_json(const Json& j);
Json to_json(const KsRunConfig& c);
KsRunConfig ks_run_config_from_json(const Json& j);

// Accepts either a bare config object or a previous output document with a
// "config" member.
Json config_section(const Json& doc);

// ---- results ----
Json to_json(const TestResult& r);
Json to_json(const LocalTestResult& r);
Json to_json(const SequentialOutcome& o);
// Wall time is only included when requested so that outputs are reproducible.
Json to_json(const PowerReport& r, bool with_timing = false);
Json to_json(const ClassificationReport& r, bool with_timing = false);
Json to_json(const KsResult& r);

}  // namespace mwk
