#include "netpen/core/errors.hpp"
#include "netpen/core/text.hpp"
#include "netpen/mission/plan.hpp"
#include "netpen/mission/validator.hpp"
#include "netpen/mission/world.hpp"
#include "netpen/planning/backend.hpp"
#include "netpen/planning/greedy.hpp"
#include "netpen/planning/instruction.hpp"
#include "netpen/planning/llm_client.hpp"
#include "netpen/planning/mas.hpp"
#include "netpen/planning/planners.hpp"
#include "netpen/planning/prompt.hpp"

#include "world_fixtures.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <random>
#include <thread>

using namespace netpen;
using namespace netpen::planning;
using mission::ActionKind;
using mission::DiagnosticKind;
using mission::WorldModel;

namespace {

std::vector<std::string> inspected(const mission::RovPlan& p) {
  std::vector<std::string> out;
  for (const auto& a : p.actions)
    if (a.kind == ActionKind::InspectNet) out.push_back(a.target);
  return out;
}

std::vector<std::string> targets(const mission::RovPlan& p) {
  std::vector<std::string> out;
  for (const auto& a : p.actions) out.push_back(a.target);
  return out;
}

PlannerInputs inputs_for(WorldModel world, std::string instruction) {
  PlannerInputs in;
  in.world = std::move(world);
  in.instruction = std::move(instruction);
  return in;
}

WorldModel farm_world() { return WorldModel::standard(); }

WorldModel s4_world() {
  WorldModel w = WorldModel::standard_layout();
  w.rovs.push_back({"ROV1", Vector3d(2, 4, -1), 100.0, allocation::DegradationVectord::with_failed({5, 6})});
  return w;
}

WorldModel single_rov(double battery) {
  WorldModel w = WorldModel::standard_layout();
  w.rovs.push_back({"ROV1", Vector3d(2, 4, -1), battery, {}});
  return w;
}

std::string violation_text() { return text::read_file(std::string(NETPEN_DATA_DIR) + "/plans/battery_violation_plan.json"); }

std::string deterministic_text(const PlannerInputs& in) {
  HeuristicBackend b;
  return b.generate(make_request(in));
}

}  // namespace

TEST(Instruction, AllCages) {
  const TaskSpec s = parse_instruction("Inspect all fish nets", farm_world());
  EXPECT_TRUE(s.fixed.empty());
  EXPECT_EQ(s.pool, (std::vector<std::string>{"cage_1", "cage_2", "cage_3", "cage_4", "cage_5"}));
  EXPECT_EQ(s.pool_rovs, (std::vector<std::string>{"ROV1", "ROV2"}));
  EXPECT_FALSE(s.battery_cap);
}

TEST(Instruction, ExplicitAssignment) {
  const TaskSpec s = parse_instruction(
      "Assign ROV1 to inspect Cage1, Cage3 and ROV2 to inspect Cage2, Cage4, Cage5 sequentially", farm_world());
  EXPECT_EQ(s.fixed.at("ROV1"), (std::vector<std::string>{"cage_1", "cage_3"}));
  EXPECT_EQ(s.fixed.at("ROV2"), (std::vector<std::string>{"cage_2", "cage_4", "cage_5"}));
  EXPECT_TRUE(s.pool.empty());
}

TEST(Instruction, RangeAndRemaining) {
  const TaskSpec s = parse_instruction("ROV1 to inspect cages 1--3 and dock, ROV2 to inspect remaining", farm_world());
  EXPECT_EQ(s.fixed.at("ROV1"), (std::vector<std::string>{"cage_1", "cage_2", "cage_3"}));
  EXPECT_FALSE(s.fixed.count("ROV2"));
  EXPECT_EQ(s.pool, (std::vector<std::string>{"cage_4", "cage_5"}));
  EXPECT_EQ(s.pool_rovs, std::vector<std::string>{"ROV2"});
  EXPECT_EQ(s.requested().size(), 5u);
}

TEST(Instruction, BatteryCapAndSubset) {
  const TaskSpec s =
      parse_instruction("Plan efficient inspection under 50% battery constraint for each ROV", farm_world());
  ASSERT_TRUE(s.battery_cap);
  EXPECT_DOUBLE_EQ(*s.battery_cap, 50.0);
  EXPECT_EQ(s.pool.size(), 5u);

  const TaskSpec t = parse_instruction("Inspect cages 1, 2 and 3", farm_world());
  EXPECT_EQ(t.pool, (std::vector<std::string>{"cage_1", "cage_2", "cage_3"}));

  const TaskSpec u = parse_instruction("Inspect cage 4 using ROV2 only", farm_world());
  EXPECT_EQ(u.pool, (std::vector<std::string>{"cage_4"}));
  EXPECT_EQ(u.pool_rovs, (std::vector<std::string>{"ROV2"}));
}

TEST(Greedy, StandardFarmAssignment) {
  const WorldModel w = farm_world();
  const mission::MissionPlan plan = greedy_plan(w, parse_instruction("Inspect all fish nets", w));
  const auto report = mission::validate_plan(plan, w);
  EXPECT_TRUE(report.valid()) << mission::format_report(report);
  ASSERT_NE(plan.find("ROV1"), nullptr);
  ASSERT_NE(plan.find("ROV2"), nullptr);
  EXPECT_EQ(targets(*plan.find("ROV1")), (std::vector<std::string>{"cage_1", "cage_1", "docking_station_1"}));
  EXPECT_EQ(inspected(*plan.find("ROV2")), (std::vector<std::string>{"cage_2", "cage_3", "cage_5", "cage_4"}));
  EXPECT_EQ(targets(*plan.find("ROV2")).back(), "docking_station_2");
  EXPECT_EQ(plan.find("ROV1")->battery_status, "15%");
  EXPECT_EQ(plan.find("ROV1")->thruster_status, "Faulty Thrusters: 1");
  // Inspect positions use the preferred offsets.
  EXPECT_TRUE(plan.find("ROV1")->actions[0].position.isApprox(Vector3d(3, 0, 0)));
  EXPECT_TRUE(plan.find("ROV2")->actions[2].position.isApprox(Vector3d(23, -20, 0)));
}

TEST(Greedy, DirectionsAlternate) {
  const WorldModel w = farm_world();
  const auto plan = greedy_plan(w, parse_instruction("Inspect all fish nets", w));
  for (const auto& r : plan.rovs) {
    auto expect = guidance::Direction::TopToBottom;
    for (const auto& a : r.actions) {
      if (a.kind != ActionKind::InspectNet) continue;
      EXPECT_EQ(a.direction, expect);
      expect = expect == guidance::Direction::TopToBottom ? guidance::Direction::BottomToTop
                                                          : guidance::Direction::TopToBottom;
    }
  }
}

TEST(Greedy, BatteryBoundary) {
  const WorldModel at35 = single_rov(35.0);
  const auto p35 = greedy_plan(at35, parse_instruction("Inspect cage 1", at35));
  EXPECT_EQ(p35.rovs[0].actions[1].kind, ActionKind::InspectNet);
  EXPECT_EQ(p35.rovs[0].battery_status, "10%");
  EXPECT_TRUE(mission::validate_plan(p35, at35).valid());

  const WorldModel below = single_rov(34.9);
  const auto p = greedy_plan(below, parse_instruction("Inspect cage 1", below));
  EXPECT_TRUE(mission::is_dock(p.rovs[0].actions[0], below));
  EXPECT_EQ(inspected(p.rovs[0]), std::vector<std::string>{"cage_1"});
  EXPECT_TRUE(mission::validate_plan(p, below).valid());

  const auto naive = greedy_plan(below, parse_instruction("Inspect cage 1", below), {}, {false, false});
  EXPECT_EQ(mission::validate_plan(naive, below).count(DiagnosticKind::BatteryViolation), 1u);
}

TEST(Greedy, IncapacitatedFleetOnlyDocks) {
  WorldModel w = WorldModel::standard_layout();
  w.rovs.push_back({"ROV1", Vector3d(2, 4, -1), 100.0, allocation::DegradationVectord::with_failed({5, 6})});
  w.rovs.push_back({"ROV2", Vector3d(25, 10, -2), 100.0, allocation::DegradationVectord::with_failed({5, 6})});
  const auto plan = greedy_plan(w, parse_instruction("Inspect all fish nets", w));
  for (const auto& r : plan.rovs) {
    ASSERT_EQ(r.actions.size(), 1u);
    EXPECT_TRUE(mission::is_dock(r.actions[0], w));
    EXPECT_EQ(r.thruster_status, "Faulty Thrusters: 5, 6");
  }
  EXPECT_NE(plan.rovs[0].actions[0].target, plan.rovs[1].actions[0].target);
  EXPECT_TRUE(mission::validate_plan(plan, w).valid());
}

TEST(Greedy, PinnedCagesKeepTheirRov) {
  const WorldModel w = farm_world();
  const auto plan = greedy_plan(
      w, parse_instruction(
             "Assign ROV1 to inspect Cage1, Cage3 and ROV2 to inspect Cage2, Cage4, Cage5 sequentially", w));
  EXPECT_EQ(inspected(*plan.find("ROV1")), (std::vector<std::string>{"cage_1", "cage_3"}));
  EXPECT_EQ(inspected(*plan.find("ROV2")), (std::vector<std::string>{"cage_2", "cage_4", "cage_5"}));
  EXPECT_TRUE(mission::validate_plan(plan, w).valid()) << mission::format_report(mission::validate_plan(plan, w));
}

TEST(Greedy, SoundOnRandomWorlds) {
  std::mt19937_64 rng(20260511);
  for (int trial = 0; trial < 200; ++trial) {
    const WorldModel w = oracle::random_world(rng);
    const TaskSpec spec = parse_instruction("Inspect all cages", w);
    const auto plan = greedy_plan(w, spec);
    const auto report = mission::validate_plan(plan, w);
    ASSERT_TRUE(report.valid()) << "trial " << trial << "\n" << mission::format_world(w)
                                << mission::serialize_plan(plan) << mission::format_report(report);

    bool any_capable = false;
    for (const auto& r : w.rovs) any_capable |= allocation::controllability_check(
                                     allocation::standard_allocation_matrix<double>(), r.degradation).capable;
    std::vector<std::string> covered;
    for (const auto& r : plan.rovs)
      for (const auto& c : inspected(r)) covered.push_back(c);
    std::sort(covered.begin(), covered.end());
    EXPECT_EQ(std::adjacent_find(covered.begin(), covered.end()), covered.end()) << "trial " << trial;
    if (any_capable) EXPECT_EQ(covered.size(), w.cages.size()) << "trial " << trial;
  }
}

TEST(Prompt, StandardFarmGolden) {
  const std::string golden = text::read_file(std::string(NETPEN_GOLDEN_DIR) + "/farm_prompt.txt");
  EXPECT_EQ(build_prompt(farm_world(), "Inspect all fish nets", allocation::standard_allocation_matrix<double>()),
            golden);
}

TEST(Prompt, VerbatimRules) {
  const std::string p =
      build_prompt(farm_world(), "Inspect all fish nets", allocation::standard_allocation_matrix<double>());
  for (const char* s : {
           "Only two possible options add 3 in x-axis or subtract 3 in y-axis. You should decide which minimizes "
           "distance.",
           "Each cage inspection consumes approximately 25% battery.",
           "If a cage inspection will cause the battery to be below 10%, ROV must dock instead",
           "we consider the motion ONLY in surge, sway, heave and yaw",
           "Each ROV should dock at different stations unless number of ROVs more than the number of docking "
           "stations",
           "inspect_net(target, {'direction': 'top-to-bottom'/'bottom-to-top', 'method': 'standard', 'distance': 3})",
           "Inspect all fish nets. Generate the inspection plan now.",
       })
    EXPECT_NE(p.find(s), std::string::npos) << s;
}

TEST(Prompt, TracksLiveValues) {
  WorldModel w = farm_world();
  w.rovs[1].battery = 55;
  w.rovs[1].degradation = allocation::DegradationVectord::with_failed({2, 5});
  Matrix6d k = allocation::standard_allocation_matrix<double>();
  k(0, 0) = 0.5;
  const std::string p = build_prompt(w, "Inspect cage 2", k);
  EXPECT_NE(p.find("Battery Level: 55%"), std::string::npos);
  EXPECT_NE(p.find("Thrusters #2, #5 faulty"), std::string::npos);
  EXPECT_NE(p.find("[ 0.500,"), std::string::npos);

  const PromptParts parts = build_prompt_parts(w, "x", k);
  EXPECT_EQ(build_prompt(w, "x", k), parts.system + "\n" + parts.user);
}

TEST(Prompt, EmptyWorld) {
  const std::string p = build_prompt(WorldModel{}, "Inspect all fish nets",
                                     allocation::standard_allocation_matrix<double>());
  EXPECT_NE(p.find("Environment Status"), std::string::npos);
  EXPECT_NE(p.find("User Instruction"), std::string::npos);
}

TEST(Prompt, Names) {
  EXPECT_EQ(display_name("cage_1"), "Cage 1");
  EXPECT_EQ(display_name("docking_station_2"), "Docking Station 2");
  EXPECT_EQ(display_name("pen_north"), "Pen North");
  EXPECT_EQ(display_name("ROV1"), "ROV1");
  EXPECT_EQ(describe_thrusters({"R", {}, 100, {}}), "All thrusters functional");
}

TEST(ExtractJson, Variants) {
  EXPECT_EQ(extract_json("```json\n{\"a\": 1}\n```"), "{\"a\": 1}");
  EXPECT_EQ(extract_json("Here is the plan:\n{\"a\": \"}\", \"b\": {\"c\": 2}} trailing"),
            "{\"a\": \"}\", \"b\": {\"c\": 2}}");
  EXPECT_EQ(extract_json(violation_text()), text::trim(violation_text()));
  EXPECT_THROW(extract_json("no json here"), SchemaError);
  EXPECT_THROW(extract_json("{\"unterminated\": 1"), SchemaError);
}

TEST(Backend, Kinds) {
  EXPECT_EQ(parse_backend_kind("llm"), BackendKind::RemoteLlm);
  EXPECT_EQ(parse_backend_kind("Deterministic"), BackendKind::Deterministic);
  EXPECT_EQ(parse_backend_kind("naive"), BackendKind::Naive);
  EXPECT_THROW(parse_backend_kind("oracle"), std::invalid_argument);
  BackendConfig c;
  c.kind = BackendKind::Naive;
  EXPECT_EQ(make_backend(c)->name(), "naive");
  c.max_retries = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Backend, FeedbackEnablesSafeguards) {
  HeuristicBackend naive(GreedyOptions{false, false});
  BackendRequest r = make_request(inputs_for(farm_world(), "Inspect all fish nets"));
  EXPECT_FALSE(naive.effective_options(r).insert_recharge);
  r.feedback.push_back({FeedbackSource::Human, "Add intermediate docking to recharge the battery.", {}});
  EXPECT_TRUE(naive.effective_options(r).insert_recharge);
  EXPECT_FALSE(naive.effective_options(r).gate_thrusters);
  r.feedback.push_back({FeedbackSource::Human, "Thruster faults: dock immediately for repairs.", {}});
  EXPECT_TRUE(naive.effective_options(r).gate_thrusters);
}

TEST(Clp, DeterministicIsValid) {
  HeuristicBackend b;
  const auto r = plan_clp(inputs_for(farm_world(), "Inspect all fish nets"), b);
  EXPECT_TRUE(r.report.valid());
  EXPECT_EQ(r.rounds, 1);
  EXPECT_EQ(r.backend_calls, 1);
}

TEST(Clp, NaiveFailsS1AndS4) {
  HeuristicBackend naive(GreedyOptions{false, false});
  const auto s1 = plan_clp(inputs_for(farm_world(), "Inspect all five cages"), naive);
  EXPECT_FALSE(s1.report.valid());
  EXPECT_GE(s1.report.count(DiagnosticKind::BatteryViolation), 1u);

  const auto s4 = plan_clp(inputs_for(s4_world(), "Inspect cages 1 and 2"), naive);
  EXPECT_EQ(s4.report.count(DiagnosticKind::ThrusterInfeasible), 1u);
  EXPECT_NE(mission::format_report(s4.report).find("Thruster 5, 6 failures prevent net inspection!"),
            std::string::npos);
}

TEST(Clp, GarbageYieldsSchemaReport) {
  ScriptedBackend b({"I cannot help with that."});
  const auto r = plan_clp(inputs_for(farm_world(), "Inspect all fish nets"), b);
  EXPECT_FALSE(r.report.valid());
  EXPECT_EQ(r.report.count(DiagnosticKind::SchemaError), 1u);
  EXPECT_TRUE(r.plan.rovs.empty());
}

TEST(Clp, BatteryViolationResponseIsInvalid) {
  ScriptedBackend b({"```json\n" + violation_text() + "```"});
  const auto r = plan_clp(inputs_for(farm_world(), "Inspect all fish nets"), b);
  EXPECT_FALSE(r.report.valid());
  EXPECT_TRUE(r.report.find("ROV1")->valid);
  EXPECT_EQ(r.report.count(DiagnosticKind::BatteryViolation), 1u);
}

TEST(Hap, ValidFirstPlanTakesOneRound) {
  HeuristicBackend b;
  OperatorChannel op;
  const auto r = plan_hap(inputs_for(farm_world(), "Inspect all fish nets"), b, op);
  EXPECT_TRUE(r.report.valid());
  EXPECT_EQ(r.rounds, 1);
}

TEST(Hap, CorrectionRepairsOverAllocation) {
  const PlannerInputs in = inputs_for(farm_world(), "Inspect all fish nets");
  std::vector<BackendRequest> seen;
  std::vector<std::string> replies{violation_text(), deterministic_text(in)};
  FunctionBackend b("recording", [&](const BackendRequest& r) {
    seen.push_back(r);
    return replies.at(seen.size() - 1);
  });
  OperatorChannel op;
  const auto r = plan_hap(in, b, op);
  EXPECT_TRUE(r.report.valid());
  EXPECT_EQ(r.rounds, 2);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_TRUE(seen[0].history.empty());
  ASSERT_EQ(seen[1].history.size(), 2u);
  EXPECT_EQ(seen[1].history[0].role, "assistant");
  EXPECT_EQ(seen[1].history[0].content, violation_text());
  EXPECT_EQ(seen[1].history[1].role, "user");
  EXPECT_NE(seen[1].history[1].content.find("Battery is now 0.00%"), std::string::npos);
  EXPECT_FALSE(seen[1].feedback.empty());
}

TEST(Hap, NaiveBackendLearnsFromOperator) {
  HeuristicBackend naive(GreedyOptions{false, false});
  OperatorChannel op;
  const auto s1 = plan_hap(inputs_for(farm_world(), "Inspect all five cages"), naive, op);
  EXPECT_TRUE(s1.report.valid());
  EXPECT_EQ(s1.rounds, 2);
  const auto s4 = plan_hap(inputs_for(s4_world(), "Inspect cages 1 and 2"), naive, op);
  EXPECT_TRUE(s4.report.valid());
  EXPECT_TRUE(inspected(s4.plan.rovs[0]).empty());
}

TEST(Hap, RoundLimit) {
  ScriptedBackend b({violation_text()});
  OperatorChannel op;
  try {
    plan_hap(inputs_for(farm_world(), "Inspect all fish nets"), b, op, {3});
    FAIL() << "expected RoundLimitExceeded";
  } catch (const RoundLimitExceeded& e) {
    EXPECT_EQ(e.last().rounds, 3);
    EXPECT_EQ(b.calls(), 3u);
    EXPECT_FALSE(e.report().valid());
  }
}

TEST(Hap, ApprovingInvalidPlanSendsValidatorOutput) {
  const PlannerInputs in = inputs_for(farm_world(), "Inspect all fish nets");
  std::vector<BackendRequest> seen;
  FunctionBackend b("recording", [&](const BackendRequest& r) {
    seen.push_back(r);
    return seen.size() == 1 ? violation_text() : deterministic_text(in);
  });
  ScriptedChannel ch({ChannelReply::approved(), ChannelReply::approved()});
  const auto r = plan_hap(in, b, ch);
  EXPECT_TRUE(r.report.valid());
  EXPECT_EQ(r.rounds, 2);
  ASSERT_FALSE(seen[1].feedback.empty());
  EXPECT_EQ(seen[1].feedback.back().source, FeedbackSource::Validator);
}

TEST(Hap, ChannelClosed) {
  ScriptedBackend b({violation_text()});
  ScriptedChannel ch({});
  EXPECT_THROW(plan_hap(inputs_for(farm_world(), "Inspect all fish nets"), b, ch), ChannelClosed);
}

TEST(Hap, ConsoleChannel) {
  HeuristicBackend b;
  std::istringstream in("approve\n");
  std::ostringstream out;
  ConsoleChannel ch(in, out);
  const auto r = plan_hap(inputs_for(farm_world(), "Inspect all fish nets"), b, ch);
  EXPECT_TRUE(r.report.valid());
  EXPECT_NE(out.str().find("ROV2 plan is VALID."), std::string::npos);
}

TEST(Mas, StandardFarmNegotiation) {
  HeuristicBackend b;
  const auto r = plan_mas(inputs_for(farm_world(), "Inspect all fish nets"), b);
  EXPECT_TRUE(r.report.valid()) << mission::format_report(r.report);
  EXPECT_LE(inspected(*r.plan.find("ROV1")).size(), 1u);
  EXPECT_GE(r.rounds, 2);
  EXPECT_LE(r.rounds, 4);
  EXPECT_TRUE(r.uncovered.empty());
  std::vector<std::string> all;
  for (const auto& p : r.plan.rovs)
    for (const auto& c : inspected(p)) all.push_back(c);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, (std::vector<std::string>{"cage_1", "cage_2", "cage_3", "cage_4", "cage_5"}));
}

TEST(Mas, NoCagesMeansDockOnly) {
  WorldModel w = WorldModel::standard_layout();
  w.cages.clear();
  w.rovs.push_back({"ROV1", Vector3d(2, 4, -1), 80.0, {}});
  HeuristicBackend b;
  const auto r = plan_mas(inputs_for(w, "Inspect all fish nets"), b);
  ASSERT_EQ(r.plan.rovs.size(), 1u);
  ASSERT_EQ(r.plan.rovs[0].actions.size(), 1u);
  EXPECT_TRUE(mission::is_dock(r.plan.rovs[0].actions[0], w));
  EXPECT_TRUE(r.report.valid());
}

TEST(Mas, HeaveFailureReroutes) {
  WorldModel w = WorldModel::standard_layout();
  w.rovs.push_back({"ROV1", Vector3d(2, 4, -1), 100.0, allocation::DegradationVectord::with_failed({5, 6})});
  w.rovs.push_back({"ROV2", Vector3d(25, 10, -2), 100.0, {}});
  HeuristicBackend b;
  const auto r = plan_mas(inputs_for(w, "Inspect cages 1, 2 and 3"), b);
  EXPECT_TRUE(r.report.valid()) << mission::format_report(r.report);
  EXPECT_TRUE(inspected(*r.plan.find("ROV1")).empty());
  EXPECT_EQ(r.plan.find("ROV1")->actions.size(), 1u);
  EXPECT_EQ(inspected(*r.plan.find("ROV2")).size(), 3u);
  const bool thruster_reason = std::any_of(r.transcript.begin(), r.transcript.end(), [](const std::string& t) {
    return t.find("(thruster)") != std::string::npos;
  });
  EXPECT_TRUE(thruster_reason);
}

TEST(Mas, RoundCap) {
  HeuristicBackend b;
  EXPECT_THROW(plan_mas(inputs_for(farm_world(), "Inspect all fish nets"), b, {1}), NegotiationDivergence);
}

TEST(Mas, BackendAgentsParseReplies) {
  Proposal p{"ROV1", {"cage_1", "cage_3"}, {}, false, 1};
  const AgentReply a = BackendAgent::parse_reply(
      "Sure.\n{\"accept\": [\"cage_1\"], \"reject\": [], \"remaining_battery\": 15}", p);
  EXPECT_EQ(a.accept, std::vector<std::string>{"cage_1"});
  ASSERT_EQ(a.reject.size(), 1u);
  EXPECT_EQ(a.reject[0].cage, "cage_3");
  EXPECT_DOUBLE_EQ(a.remaining_battery, 15.0);

  // An LLM-style backend answering each offer with the rule agent's verdict.
  FunctionBackend b("agents", [](const BackendRequest& r) {
    EXPECT_NE(r.prompt.system.find("ROV"), std::string::npos);
    return std::string("{\"accept\": [], \"reject\": [{\"cage\": \"cage_1\", \"reason\": \"other\"}]}");
  });
  const auto r = plan_mas(inputs_for(single_rov(100), "Inspect cage 1"), b);
  EXPECT_EQ(r.uncovered, std::vector<std::string>{"cage_1"});
  EXPECT_TRUE(r.report.valid());
}

namespace {

struct MockServer {
  httplib::Server server;
  int port{0};
  std::thread thread;

  MockServer() {
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~MockServer() {
    server.stop();
    thread.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port) + "/v1"; }
};

std::string completion(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

BackendConfig llm_config(const std::string& endpoint) {
  BackendConfig c;
  c.kind = BackendKind::RemoteLlm;
  c.endpoint = endpoint;
  c.api_key = "test-key";
  c.model = "mock-model";
  c.backoff_s = 0.01;
  c.timeout_s = 5;
  return c;
}

}  // namespace

TEST(LlmClient, PlanCompletion) {
  MockServer mock;
  nlohmann::json received;
  std::string auth;
  mock.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    received = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(completion(violation_text()), "application/json");
  });
  const auto dir = std::filesystem::temp_directory_path() / "netpen_llm_transcripts";
  std::filesystem::remove_all(dir);
  BackendConfig c = llm_config(mock.endpoint());
  c.transcript_dir = dir;
  LlmBackend llm(c);
  const auto r = plan_clp(inputs_for(farm_world(), "Inspect all fish nets"), llm);
  EXPECT_EQ(r.responses.at(0), violation_text());
  EXPECT_EQ(r.plan.rovs.size(), 2u);
  EXPECT_EQ(auth, "Bearer test-key");
  EXPECT_EQ(received["model"], "mock-model");
  ASSERT_EQ(received["messages"].size(), 2u);
  EXPECT_EQ(received["messages"][0]["role"], "system");
  EXPECT_EQ(received["messages"][1]["role"], "user");
  EXPECT_NE(received["messages"][1]["content"].get<std::string>().find("Inspect all fish nets"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "call_0001.json"));
  EXPECT_EQ(llm.name(), "llm:mock-model");
}

TEST(LlmClient, ProseAroundJsonAndHapHistory) {
  MockServer mock;
  std::atomic<int> calls{0};
  std::size_t last_messages = 0;
  const PlannerInputs in = inputs_for(farm_world(), "Inspect all fish nets");
  const std::string good = deterministic_text(in);
  mock.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    last_messages = nlohmann::json::parse(req.body)["messages"].size();
    const int n = ++calls;
    res.set_content(completion("Here is the plan.\n" + (n == 1 ? violation_text() : good) + "\nDone."),
                    "application/json");
  });
  LlmBackend llm(llm_config(mock.endpoint()));
  OperatorChannel op;
  const auto r = plan_hap(in, llm, op);
  EXPECT_TRUE(r.report.valid());
  EXPECT_EQ(r.rounds, 2);
  EXPECT_EQ(last_messages, 4u);
}

TEST(LlmClient, RetriesThenUnavailable) {
  MockServer mock;
  std::atomic<int> calls{0};
  mock.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 503;
  });
  LlmBackend llm(llm_config(mock.endpoint()));
  EXPECT_THROW(llm.generate(make_request(inputs_for(farm_world(), "x"))), BackendUnavailable);
  EXPECT_EQ(calls.load(), 3);
}

TEST(LlmClient, RecoversAfterTransientErrors) {
  MockServer mock;
  std::atomic<int> calls{0};
  mock.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (++calls < 3) {
      res.status = 429;
      return;
    }
    res.set_content(completion("{}"), "application/json");
  });
  LlmBackend llm(llm_config(mock.endpoint()));
  EXPECT_EQ(llm.generate(make_request(inputs_for(farm_world(), "x"))), "{}");
  EXPECT_GT(llm.last_latency(), 0.0);
}

TEST(LlmClient, ClientErrorIsNotRetried) {
  MockServer mock;
  std::atomic<int> calls{0};
  mock.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 401;
    res.set_content("bad key", "text/plain");
  });
  LlmBackend llm(llm_config(mock.endpoint()));
  EXPECT_THROW(llm.generate(make_request(inputs_for(farm_world(), "x"))), BackendUnavailable);
  EXPECT_EQ(calls.load(), 1);
}

TEST(LlmClient, Timeout) {
  MockServer mock;
  mock.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content(completion("{}"), "application/json");
  });
  BackendConfig c = llm_config(mock.endpoint());
  c.timeout_s = 0.2;
  c.max_retries = 1;
  LlmBackend llm(c);
  EXPECT_THROW(llm.generate(make_request(inputs_for(farm_world(), "x"))), BackendTimeout);
}

TEST(LlmClient, UnreachableOrMissingEndpoint) {
  BackendConfig c = llm_config("http://127.0.0.1:1");
  c.max_retries = 0;
  LlmBackend unreachable(c);
  EXPECT_THROW(unreachable.generate(make_request(inputs_for(farm_world(), "x"))), BackendUnavailable);

  LlmBackend missing(llm_config(""));
  EXPECT_THROW(missing.generate(make_request(inputs_for(farm_world(), "x"))), BackendUnavailable);
}
