#include <doctest.h>

#include "hdp/harness.hpp"
#include "hdp/lifecycle.hpp"
#include "token_fixtures.hpp"

using namespace hdp;
using namespace hdp::harness;
using testutil::fixed_key;

namespace {

constexpr int64_t kClock = 1767225600000;

std::vector<SimulatedAgent> honest_agents(int n) {
  std::vector<SimulatedAgent> agents;
  for (int i = 1; i <= n; ++i) {
    agents.push_back({"agent-" + std::to_string(i), i == 1 ? "orchestrator" : "worker",
                      Behavior::Honest});
  }
  return agents;
}

}  // namespace

TEST_CASE("honest pipelines verify end to end") {
  auto issuer = fixed_key("issuer");
  auto agents = honest_agents(3);
  PipelineResult result = run_pipeline(agents, issuer, "sess-h", kClock, 1);
  CHECK(result.token_present);
  REQUIRE(result.terminal_report.has_value());
  CHECK(result.terminal_report->passed);
  CHECK(result.chain_length == 3);

  auto ten = honest_agents(10);
  result = run_pipeline(ten, issuer, "sess-h", kClock, 2);
  CHECK(result.terminal_report->passed);
  CHECK(result.chain_length == 10);
}

TEST_CASE("honest soundness across randomized runs") {
  auto issuer = fixed_key("issuer");
  std::mt19937_64 rng(505);
  for (int i = 0; i < 100; ++i) {
    int n = 1 + static_cast<int>(rng() % 20);
    auto agents = honest_agents(n);
    PipelineResult result = run_pipeline(agents, issuer, "sess-r", kClock, rng());
    REQUIRE(result.terminal_report.has_value());
    CAPTURE(result.terminal_report->summary());
    CHECK(result.terminal_report->passed);
    CHECK(result.chain_length == static_cast<size_t>(n));
  }
}

TEST_CASE("a dropped token is observed downstream") {
  auto issuer = fixed_key("issuer");
  std::vector<SimulatedAgent> agents = honest_agents(3);
  agents[1].behavior = Behavior::DropsToken;
  PipelineResult result = run_pipeline(agents, issuer, "sess-d", kClock, 3);
  CHECK_FALSE(result.token_present);
  CHECK_FALSE(result.terminal_report.has_value());
  bool observed = false;
  for (const auto& e : result.transcript) {
    if (e.event == "observe" && e.detail == "no token present") observed = true;
  }
  CHECK(observed);
}

TEST_CASE("scenario S1: missing token is detected") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    ScenarioReport report = run_scenario(Scenario::S1, seed);
    CAPTURE(seed);
    CHECK(report.detected);
    CHECK(report.detection_signal == "no token present");
  }
}

TEST_CASE("scenario S2: forged token fails root signature verification") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    ScenarioReport report = run_scenario(Scenario::S2, seed);
    CAPTURE(seed);
    CHECK(report.detected);
    CHECK(report.detection_signal == "failed_step=3");
  }
}

TEST_CASE("scenario S3: tampered chains fail at step 4 or 5 per mutation kind") {
  bool saw_step4 = false;
  bool saw_step5 = false;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    ScenarioReport report = run_scenario(Scenario::S3, seed);
    CAPTURE(seed);
    CAPTURE(report.expected_signal);
    CAPTURE(report.detection_signal);
    CHECK(report.detected);
    if (report.detection_signal == "failed_step=4") saw_step4 = true;
    if (report.detection_signal == "failed_step=5") saw_step5 = true;
  }
  CHECK(saw_step4);
  CHECK(saw_step5);
}

TEST_CASE("scenario S4: replayed token is blocked by session binding") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    ScenarioReport report = run_scenario(Scenario::S4, seed);
    CAPTURE(seed);
    CHECK(report.detected);
    CHECK(report.detection_signal == "failed_step=7");
  }
}

TEST_CASE("transcripts are deterministic under a fixed seed") {
  ScenarioReport a = run_scenario(Scenario::S3, 1234);
  ScenarioReport b = run_scenario(Scenario::S3, 1234);
  CHECK(transcript_to_jsonl(a.transcript) == transcript_to_jsonl(b.transcript));
  CHECK(json::canonicalize(to_json(a)) == json::canonicalize(to_json(b)));
  ScenarioReport c = run_scenario(Scenario::S3, 1235);
  CHECK(transcript_to_jsonl(a.transcript) != transcript_to_jsonl(c.transcript));
}

TEST_CASE("transcript export is one JSON object per line") {
  ScenarioReport report = run_scenario(Scenario::S2, 7);
  std::string jsonl = transcript_to_jsonl(report.transcript);
  size_t lines = 0;
  size_t start = 0;
  while (start < jsonl.size()) {
    size_t end = jsonl.find('\n', start);
    REQUIRE(end != std::string::npos);
    CHECK_NOTHROW(json::parse(std::string_view(jsonl).substr(start, end - start)));
    ++lines;
    start = end + 1;
  }
  CHECK(lines == report.transcript.size());
}

TEST_CASE("semantic injection boundary: a lying but genuine hop verifies") {
  // An injected instruction that makes a legitimate agent record a truthful-
  // looking hop is outside the protocol's detection surface: the hop is
  // genuinely signed, so verification passes. Detection of the lie is an
  // application-layer concern.
  auto issuer = fixed_key("issuer");
  IssueRequest req;
  req.principal.id = "alice";
  req.scope.intent = "summarize the sales meeting notes";
  req.session_id = "sess-si";
  req.now = kClock;
  Token t = issue(req, issuer);

  HopRequest honest_looking;
  honest_looking.agent_id = "agent-1";
  honest_looking.agent_type = "worker";
  honest_looking.action_summary = "summarizing meeting notes";  // not what it actually did
  honest_looking.now = kClock + 1;
  t = extend(t, honest_looking, issuer, kClock);

  SessionContext ctx;
  ctx.add_key(issuer.public_key());
  ctx.current_session_id = "sess-si";
  ctx.now = kClock + 10;
  auto report = verify_token(t, ctx);
  CHECK(report.passed);  // expected protocol behavior, not a bug
}

TEST_CASE("scenario names round-trip") {
  for (Scenario s : {Scenario::S1, Scenario::S2, Scenario::S3, Scenario::S4}) {
    CHECK(scenario_from_name(scenario_name(s)) == s);
  }
  CHECK(scenario_from_name("s2") == Scenario::S2);
  CHECK_FALSE(scenario_from_name("s9").has_value());
}
