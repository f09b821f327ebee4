#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "qplanar/execution.hpp"

namespace qplanar {

struct Check {
  std::string name;
  double value = 0.0;
  /// "<=", ">=" or "==".
  std::string op;
  double threshold = 0.0;
  bool pass = false;
};

/// Result of one scenario run. Serializes to a single JSON document; every
/// field except duration_seconds is a deterministic function of the config.
struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  bool pass = true;
  double duration_seconds = 0.0;

  void check(std::string name, double value, std::string op, double threshold);
  void note(std::string text) { notes.push_back(std::move(text)); }
  /// Appends another report's checks under "<scenario>/<name>".
  void merge(const Report& sub);

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 1;
  int n = 2;
  /// Overrides d = 4n for the identity structure (e.g. 2 for the projective plane case).
  int dim = 0;
  double tol_alg = 1e-9;
  double tol_ode = 1e-6;
  double tol_map = 1e-4;
  double step = 1e-3;
  /// Curves or probes per scenario; 0 picks the scenario default.
  int samples = 0;
  /// Structure for thm25 / decompose, or structure A for thm26.
  std::string structure;
  /// Structure B for thm26.
  std::string structure_b;
  Execution policy = Execution::parallel;

  nlohmann::json to_json() const;
};

/// Names accepted by run_scenario.
const std::vector<std::string>& scenario_names();

Report run_thm25(const ScenarioConfig& config);
Report run_thm26(const ScenarioConfig& config);
Report run_lem32(const ScenarioConfig& config);
Report run_thm34(const ScenarioConfig& config);
Report run_thm31(const ScenarioConfig& config);
Report run_decompose(const ScenarioConfig& config);
Report run_geodesic(const ScenarioConfig& config);
Report run_planarity(const ScenarioConfig& config);
/// Every theorem scenario (thm25, thm26, lem32, thm34, thm31) aggregated.
Report run_all(const ScenarioConfig& config);

/// Dispatches on config.scenario ("all" included). Throws ConfigError for unknown names
/// or violated scenario preconditions.
Report run_scenario(const ScenarioConfig& config);

}  // namespace qplanar
