// netpen: plan, validate and simulate net-pen inspection missions.
//
// Exit status: 0 success, 1 invalid plan (or a scenario verdict that differs
// from its expectation), 2 runtime failure, 64 usage error.

#include "netpen/core/errors.hpp"
#include "netpen/core/text.hpp"
#include "netpen/mission/plan.hpp"
#include "netpen/mission/validator.hpp"
#include "netpen/mission/world.hpp"
#include "netpen/planning/architecture.hpp"
#include "netpen/planning/backend.hpp"
#include "netpen/planning/prompt.hpp"
#include "netpen/sim/executor.hpp"
#include "netpen/sim/metrics.hpp"
#include "netpen/sim/scenario.hpp"
#include "netpen/sim/service.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <iostream>
#include <optional>

using namespace netpen;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailure = 2;
constexpr int kUsage = 64;

struct BackendArgs {
  std::string kind{"deterministic"};
  std::string model;
  std::string transcripts;

  void add_to(CLI::App& app) {
    app.add_option("-b,--backend", kind, "deterministic, naive or llm")->capture_default_str();
    app.add_option("--model", model, "LLM model name (llm backend)");
    app.add_option("--transcripts", transcripts, "directory for LLM request/response logs");
  }

  planning::BackendConfig config() const {
    const auto k = planning::parse_backend_kind(kind);
    auto c = k == planning::BackendKind::RemoteLlm ? planning::BackendConfig::from_env(k) : planning::BackendConfig{};
    c.kind = k;
    if (!model.empty()) c.model = model;
    if (!transcripts.empty()) c.transcript_dir = transcripts;
    return c;
  }
};

mission::WorldModel world_from(const std::string& path) {
  return path.empty() ? mission::WorldModel::standard() : mission::load_world(path);
}

int print_verdict(const mission::ValidationReport& report) {
  std::cout << mission::format_report(report);
  return report.valid() ? kOk : kInvalid;
}

struct PlanArgs {
  std::string world, instruction, arch{"hap"}, out;
  BackendArgs backend;
  int max_rounds{5};
  bool interactive{false};
};

int run_plan(const PlanArgs& a) {
  planning::PlannerInputs in;
  in.world = world_from(a.world);
  in.instruction = a.instruction;
  auto backend = planning::make_backend(a.backend.config());
  planning::ArchitectureOptions options;
  options.hap.max_rounds = a.max_rounds;
  planning::ConsoleChannel console(std::cin, std::cout);
  if (a.interactive) options.channel = &console;
  const auto arch = planning::parse_architecture(a.arch);
  planning::PlanningResult r;
  try {
    r = planning::run_architecture(arch, in, *backend, options);
  } catch (const planning::RoundLimitExceeded& e) {
    std::cerr << e.what() << "\n";
    r = e.last();
  }
  const std::string json = mission::serialize_plan(r.plan);
  std::cout << json << "\n";
  if (!a.out.empty()) text::write_file(a.out, json + "\n");
  std::cout << fmt::format("{}: {} round(s), {} backend call(s), {:.3f} s\n", planning::to_string(arch), r.rounds,
                           r.backend_calls, r.backend_seconds);
  return print_verdict(r.report);
}

struct ExecuteArgs {
  std::string plan, world, out{"trace"};
  std::uint64_t seed{1};
  bool serial{false};
  bool force{false};
};

int run_execute(const ExecuteArgs& a) {
  const auto world = world_from(a.world);
  const auto plan = mission::parse_plan(text::read_file(a.plan));
  const auto report = mission::validate_plan(plan, world);
  if (!report.valid() && !a.force) {
    std::cout << mission::format_report(report) << "refusing to execute an invalid plan (use --force)\n";
    return kInvalid;
  }
  sim::ExecutorConfig config;
  config.seed = a.seed;
  config.parallel = !a.serial;
  const auto trace = sim::execute_plan(plan, world, config);
  for (const auto& f : sim::write_trace_csvs(trace, a.out)) std::cout << "wrote " << f.string() << "\n";
  std::cout << sim::format_summary(trace);
  return trace.completed() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan, validate and simulate net-pen inspection missions with multiple ROVs."};
  app.require_subcommand(1);
  std::optional<int> code;

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "generate a plan from an instruction and validate it");
  plan_cmd->add_option("instruction", plan.instruction, "natural-language mission instruction")->required();
  plan_cmd->add_option("-w,--world", plan.world, "world file (default: five-cage farm)");
  plan_cmd->add_option("-a,--arch", plan.arch, "clp, hap or mas")->capture_default_str();
  plan_cmd->add_option("--max-rounds", plan.max_rounds, "HAP round limit")->capture_default_str();
  plan_cmd->add_flag("-i,--interactive", plan.interactive, "review HAP plans at the terminal");
  plan_cmd->add_option("-o,--out", plan.out, "write the plan JSON here");
  plan.backend.add_to(*plan_cmd);
  plan_cmd->callback([&] { code = run_plan(plan); });

  std::string validate_plan_path, validate_world;
  auto* validate_cmd = app.add_subcommand("validate", "check a plan file against a world");
  validate_cmd->add_option("plan", validate_plan_path, "plan JSON file")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("-w,--world", validate_world, "world file (default: five-cage farm)");
  validate_cmd->callback([&] {
    planning::PlannerInputs in;
    in.world = world_from(validate_world);
    planning::PlanningResult r;
    planning::parse_and_validate(text::read_file(validate_plan_path), in, r);
    code = print_verdict(r.report);
  });

  ExecuteArgs exec;
  auto* exec_cmd = app.add_subcommand("execute", "simulate a plan and write trace CSVs");
  exec_cmd->add_option("plan", exec.plan, "plan JSON file")->required()->check(CLI::ExistingFile);
  exec_cmd->add_option("-w,--world", exec.world, "world file (default: five-cage farm)");
  exec_cmd->add_option("-o,--out", exec.out, "trace directory")->capture_default_str();
  exec_cmd->add_option("--seed", exec.seed, "transit planner seed")->capture_default_str();
  exec_cmd->add_flag("--serial", exec.serial, "simulate ROVs one after another");
  exec_cmd->add_flag("--force", exec.force, "execute even if validation fails");
  exec_cmd->callback([&] { code = run_execute(exec); });

  std::string scenario_dir = std::string(NETPEN_DATA_DIR) + "/scenarios";
  BackendArgs scenario_backend;
  bool scenario_json = false;
  auto* scenario_cmd = app.add_subcommand("scenario", "run the scenario suite with every planner");
  scenario_cmd->add_option("-d,--dir", scenario_dir, "directory of *.scenario files")->capture_default_str();
  scenario_cmd->add_flag("--json", scenario_json, "print JSON instead of the matrix");
  scenario_backend.add_to(*scenario_cmd);
  scenario_cmd->callback([&] {
    const auto r = sim::run_scenario_suite(sim::load_scenarios(scenario_dir), scenario_backend.config());
    if (scenario_json) {
      std::cout << r.to_json().dump(2) << "\n";
    } else {
      std::cout << r.format_matrix();
      for (const auto& c : r.cells)
        if (!c.error.empty()) std::cout << c.scenario << " " << planning::to_string(c.architecture) << ": " << c.error << "\n";
    }
    code = r.matches_expected() ? kOk : kInvalid;
  });

  bool faults_json = false;
  auto* faults_cmd = app.add_subcommand("faults", "helix tracking error under thruster failures");
  faults_cmd->add_flag("--json", faults_json, "print JSON");
  faults_cmd->callback([&] {
    sim::MetricsReport report;
    report.faults = sim::fault_condition_study();
    std::cout << (faults_json ? report.to_json().dump(2) + "\n" : report.format());
    code = kOk;
  });

  PlanArgs metrics;
  int runs = 20;
  bool metrics_json = false;
  auto* metrics_cmd = app.add_subcommand("metrics", "plan repeatedly and report PSR, EXESR and mean time");
  metrics_cmd->add_option("instruction", metrics.instruction, "mission instruction")->required();
  metrics_cmd->add_option("-w,--world", metrics.world, "world file (default: five-cage farm)");
  metrics_cmd->add_option("-a,--arch", metrics.arch, "clp, hap, mas or all")->capture_default_str();
  metrics_cmd->add_option("-n,--runs", runs, "planner runs")->capture_default_str();
  metrics_cmd->add_flag("--json", metrics_json, "print JSON");
  metrics.backend.add_to(*metrics_cmd);
  metrics_cmd->callback([&] {
    planning::PlannerInputs in;
    in.world = world_from(metrics.world);
    in.instruction = metrics.instruction;
    auto backend = planning::make_backend(metrics.backend.config());
    std::vector<planning::Architecture> archs;
    if (text::to_lower(metrics.arch) == "all")
      archs = {planning::Architecture::Clp, planning::Architecture::Hap, planning::Architecture::Mas};
    else
      archs = {planning::parse_architecture(metrics.arch)};
    sim::MetricsReport report;
    for (auto a : archs) {
      report.planners.push_back(sim::compute_metrics(
          [&](int) {
            try {
              return planning::run_architecture(a, in, *backend);
            } catch (const planning::RoundLimitExceeded& e) {
              return e.last();
            }
          },
          in.world, runs, {}, std::string(planning::to_string(a))));
    }
    std::cout << (metrics_json ? report.to_json().dump(2) + "\n" : report.format());
    code = kOk;
  });

  std::string prompt_world, prompt_instruction;
  auto* prompt_cmd = app.add_subcommand("prompt", "print the planner prompt for a world and instruction");
  prompt_cmd->add_option("instruction", prompt_instruction, "mission instruction")->required();
  prompt_cmd->add_option("-w,--world", prompt_world, "world file (default: five-cage farm)");
  prompt_cmd->callback([&] {
    std::cout << planning::build_prompt(world_from(prompt_world), prompt_instruction,
                                        allocation::standard_allocation_matrix<double>());
    code = kOk;
  });

  std::string serve_host = "127.0.0.1", serve_world;
  int serve_port = 8080;
  sim::ServiceConfig serve_config;
  BackendArgs serve_backend;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service for the operator console");
  serve_cmd->add_option("--host", serve_host, "bind address")->capture_default_str();
  serve_cmd->add_option("-p,--port", serve_port, "port (0 picks a free one)")->capture_default_str();
  serve_cmd->add_option("-w,--world", serve_world, "world file (default: five-cage farm)");
  serve_cmd->add_option("--max-rounds", serve_config.hap.max_rounds, "HAP round limit")->capture_default_str();
  serve_backend.add_to(*serve_cmd);
  serve_cmd->callback([&] {
    serve_config.world = world_from(serve_world);
    serve_config.backend = serve_backend.config();
    sim::serve_hap(serve_host, serve_port, serve_config);
    code = kOk;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return code.value_or(kOk);
}
