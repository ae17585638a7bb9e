#include "netpen/sim/scenario.hpp"

#include "netpen/core/errors.hpp"
#include "netpen/core/text.hpp"
#include "netpen/planning/greedy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <set>

namespace netpen::sim {

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  int line_no = 0;
  for (auto raw : text::split_lines(text)) {
    ++line_no;
    const auto line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    const auto space = line.find_first_of(" \t");
    const std::string key(line.substr(0, space));
    const std::string rest = space == std::string_view::npos ? "" : std::string(text::trim(line.substr(space)));
    const std::string loc = fmt::format("line {}", line_no);
    if (key == "id") {
      s.id = rest;
    } else if (key == "name") {
      s.name = rest;
    } else if (key == "instruction") {
      s.instruction = rest;
    } else if (key == "expect") {
      const auto tok = text::split_whitespace(rest);
      if (tok.size() != 2) throw SchemaError(loc, "expect needs an architecture and valid|invalid");
      planning::Architecture a;
      try {
        a = planning::parse_architecture(tok[0]);
      } catch (const std::invalid_argument& e) {
        throw SchemaError(loc, e.what());
      }
      if (tok[1] != "valid" && tok[1] != "invalid") throw SchemaError(loc, "expected 'valid' or 'invalid'");
      s.expected[a] = tok[1] == "valid";
    }
  }
  if (s.id.empty()) throw SchemaError("scenario", "missing 'id'");
  if (s.instruction.empty()) throw SchemaError(s.id, "missing 'instruction'");
  s.world = mission::parse_world(text, {"id", "name", "instruction", "expect"});
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(text::read_file(path)); }

std::vector<Scenario> load_scenarios(const std::filesystem::path& dir) {
  std::vector<Scenario> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".scenario") out.push_back(load_scenario(entry.path()));
  std::sort(out.begin(), out.end(), [](const Scenario& a, const Scenario& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].id == out[i - 1].id) throw SchemaError(out[i].id, "duplicate scenario id");
  return out;
}

bool SuiteResult::matches_expected() const {
  return std::all_of(cells.begin(), cells.end(), [](const SuiteCell& c) { return c.matches(); });
}

const SuiteCell* SuiteResult::find(std::string_view scenario, planning::Architecture a) const {
  for (const auto& c : cells)
    if (c.scenario == scenario && c.architecture == a) return &c;
  return nullptr;
}

std::string SuiteResult::format_matrix() const {
  using planning::Architecture;
  std::vector<std::string> ids;
  for (const auto& c : cells)
    if (std::find(ids.begin(), ids.end(), c.scenario) == ids.end()) ids.push_back(c.scenario);
  std::string out = "Scenario  CLP  HAP  MAS\n";
  for (const auto& id : ids) {
    out += fmt::format("{:<8}", id);
    for (auto a : {Architecture::Clp, Architecture::Hap, Architecture::Mas}) {
      const auto* c = find(id, a);
      std::string mark = c ? (c->valid ? "✓" : "✗") : "-";
      if (c && !c->matches()) mark += "!";
      out += "  " + mark + (c && !c->matches() ? " " : "  ");
    }
    out += "\n";
  }
  return out;
}

nlohmann::json SuiteResult::to_json() const {
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json j{{"scenario", c.scenario},
                     {"architecture", planning::to_string(c.architecture)},
                     {"valid", c.valid},
                     {"rounds", c.rounds},
                     {"report", c.report}};
    j["expected"] = c.expected ? nlohmann::json(*c.expected) : nlohmann::json();
    if (!c.error.empty()) j["error"] = c.error;
    cells_json.push_back(j);
  }
  return {{"cells", cells_json}, {"matches_expected", matches_expected()}, {"seconds", seconds}};
}

SuiteResult run_scenario_suite(const std::vector<Scenario>& scenarios, const planning::BackendConfig& backend) {
  using planning::Architecture;
  const auto t0 = std::chrono::steady_clock::now();
  std::unique_ptr<planning::PlanBackend> shared, naive, full;
  planning::PlanBackend *clp, *hap, *mas;
  if (backend.kind == planning::BackendKind::RemoteLlm) {
    shared = planning::make_backend(backend);
    clp = hap = mas = shared.get();
  } else {
    naive = std::make_unique<planning::HeuristicBackend>(planning::GreedyOptions{false, false});
    full = std::make_unique<planning::HeuristicBackend>();
    clp = hap = naive.get();
    mas = backend.kind == planning::BackendKind::Naive ? naive.get() : full.get();
  }
  SuiteResult out;
  for (const auto& s : scenarios) {
    planning::PlannerInputs in;
    in.world = s.world;
    in.instruction = s.instruction;
    for (auto a : {Architecture::Clp, Architecture::Hap, Architecture::Mas}) {
      SuiteCell cell;
      cell.scenario = s.id;
      cell.architecture = a;
      if (auto it = s.expected.find(a); it != s.expected.end()) cell.expected = it->second;
      planning::PlanBackend& b = a == Architecture::Clp ? *clp : a == Architecture::Hap ? *hap : *mas;
      try {
        const auto r = planning::run_architecture(a, in, b);
        cell.valid = r.report.valid();
        cell.rounds = r.rounds;
        cell.report = mission::format_report(r.report);
      } catch (const planning::RoundLimitExceeded& e) {
        cell.rounds = e.last().rounds;
        cell.report = mission::format_report(e.report());
        cell.error = e.what();
      } catch (const Error& e) {
        cell.error = e.what();
      }
      out.cells.push_back(std::move(cell));
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace netpen::sim
