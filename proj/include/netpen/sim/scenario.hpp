#pragma once

#include "netpen/mission/world.hpp"
#include "netpen/planning/architecture.hpp"
#include "netpen/planning/backend.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace netpen::sim {

/// A planning test case: a world, an instruction and the expected verdict per
/// planner architecture.
struct Scenario {
  std::string id;
  std::string name;
  std::string instruction;
  mission::WorldModel world;
  std::map<planning::Architecture, bool> expected;
};

/// World-file syntax plus
///   id <id>
///   name <free text>
///   instruction <free text>
///   expect <clp|hap|mas> <valid|invalid>
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
/// Every *.scenario file in `dir`, sorted by id. Throws SchemaError on duplicate ids.
std::vector<Scenario> load_scenarios(const std::filesystem::path& dir);

struct SuiteCell {
  std::string scenario;
  planning::Architecture architecture{planning::Architecture::Clp};
  bool valid{false};
  std::optional<bool> expected;
  int rounds{0};
  std::string report;  // validator console output
  std::string error;   // planner failure (round limit, divergence, backend)

  bool matches() const { return !expected || *expected == valid; }
};

struct SuiteResult {
  std::vector<SuiteCell> cells;
  double seconds{0.0};

  bool matches_expected() const;
  const SuiteCell* find(std::string_view scenario, planning::Architecture a) const;
  /// Scenario rows by CLP/HAP/MAS columns, with a check or cross per cell.
  std::string format_matrix() const;
  nlohmann::json to_json() const;
};

/// Plans every scenario with CLP, HAP and MAS and validates the results.
/// With a remote LLM backend all three use it. Otherwise the planners stand in
/// for the reference behaviour: CLP is the naive single-shot planner, HAP the
/// same planner revised by a simulated operator, MAS the rule-based agents.
SuiteResult run_scenario_suite(const std::vector<Scenario>& scenarios, const planning::BackendConfig& backend);

}  // namespace netpen::sim
