#include "hdp/harness.hpp"

#include <random>

#include "hdp/lifecycle.hpp"

namespace hdp::harness {

namespace {

// Fixed simulation epoch so seeded runs are byte-identical across machines.
constexpr int64_t kSimClock = 1767225600000;

crypto::KeyPair key_from_rng(std::mt19937_64& rng, const std::string& kid) {
  std::array<uint8_t, 32> seed;
  for (auto& b : seed) b = static_cast<uint8_t>(rng());
  return crypto::KeyPair::from_seed(kid, seed);
}

std::string uuid_from_rng(std::mt19937_64& rng) {
  std::array<uint8_t, 16> bytes;
  for (auto& b : bytes) b = static_cast<uint8_t>(rng());
  bytes[6] = static_cast<uint8_t>((bytes[6] & 0x0F) | 0x40);
  bytes[8] = static_cast<uint8_t>((bytes[8] & 0x3F) | 0x80);
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (size_t i = 0; i < 16; ++i) {
    if (i == 4 || i == 6 || i == 8 || i == 10) out += '-';
    out += digits[bytes[i] >> 4];
    out += digits[bytes[i] & 0xF];
  }
  return out;
}

IssueRequest request_from_rng(std::mt19937_64& rng, const std::string& session_id, int64_t now) {
  static const char* principals[] = {"alice", "bob", "carol", "dan"};
  static const char* intents[] = {
      "summarize the incident channel and post a digest",
      "book travel for the platform offsite",
      "refresh the quarterly revenue dashboard",
      "triage open support tickets and draft replies",
  };
  static const char* classes[] = {"public", "internal", "confidential", "restricted"};
  IssueRequest req;
  req.principal.id = principals[rng() % 4];
  req.principal.id_type = "opaque";
  req.scope.intent = intents[rng() % 4];
  req.scope.data_classification = classes[rng() % 4];
  req.scope.network_egress = rng() % 2 == 0;
  req.scope.persistence = rng() % 2 == 0;
  req.session_id = session_id;
  req.now = now;
  return req;
}

struct Sim {
  std::mt19937_64 rng;
  const crypto::KeyPair& issuer;
  SessionContext ctx;
  std::vector<PipelineEvent> transcript;
  std::optional<Token> current;
  std::optional<TamperInfo> tamper;
  int64_t clock;

  Sim(const crypto::KeyPair& issuer_key, const std::string& session_id, int64_t clock_ms,
      uint64_t seed)
      : rng(seed), issuer(issuer_key), clock(clock_ms) {
    ctx.add_key(issuer.public_key());
    ctx.current_session_id = session_id;
    ctx.now = clock_ms;
  }

  void record(const std::string& actor, const std::string& event, const std::string& detail) {
    PipelineEvent e;
    e.index = static_cast<int>(transcript.size());
    e.actor = actor;
    e.event = event;
    e.detail = detail;
    if (current) e.token = canonical_bytes(*current);
    transcript.push_back(std::move(e));
  }

  void issue_token() {
    IssueRequest req = request_from_rng(rng, ctx.current_session_id, clock);
    current = issue(req, issuer, uuid_from_rng(rng));
    record("issuer", "issue",
           "principal " + req.principal.id + " authorizes \"" + req.scope.intent + "\"");
  }

  void act(const SimulatedAgent& agent) {
    switch (agent.behavior) {
      case Behavior::Honest: return act_honest(agent);
      case Behavior::DropsToken: return act_drop(agent);
      case Behavior::ForgesToken: return act_forge(agent);
      case Behavior::TampersHop: return act_tamper(agent);
      case Behavior::ReplaysPriorSession: return act_replay(agent);
    }
  }

  void act_honest(const SimulatedAgent& agent) {
    if (!current) {
      record(agent.agent_id, "observe", "no token present");
      return;
    }
    VerificationReport report = verify_token(*current, ctx);
    record(agent.agent_id, "verify", report.summary());
    if (!report.passed) return;  // forward unchanged; do not extend a bad token
    HopRequest hop;
    hop.agent_id = agent.agent_id;
    hop.agent_type = agent.agent_type;
    hop.action_summary = agent.agent_id + " delegates subtask";
    hop.now = clock + static_cast<int64_t>(current->chain.size()) + 1;
    current = extend(*current, hop, issuer, clock);
    record(agent.agent_id, "extend", "appended hop " + std::to_string(current->chain.size()));
  }

  void act_drop(const SimulatedAgent& agent) {
    current.reset();
    record(agent.agent_id, "drop", "forwards the task with no token attached");
  }

  void act_forge(const SimulatedAgent& agent) {
    bool reuse_kid = rng() % 2 == 0;
    std::string kid = reuse_kid ? issuer.kid() : "kid-" + std::to_string(rng() % 1000);
    crypto::KeyPair attacker = key_from_rng(rng, kid);
    IssueRequest req = request_from_rng(rng, ctx.current_session_id, clock);
    req.principal.id = "forged-principal";
    current = issue(req, attacker, uuid_from_rng(rng));
    record(agent.agent_id, "forge",
           "substitutes a token signed by a non-issuer key (kid \"" + kid + "\")");
  }

  void act_tamper(const SimulatedAgent& agent) {
    if (!current || current->chain.empty()) {
      record(agent.agent_id, "tamper", "nothing to tamper with");
      return;
    }
    Token t = *current;
    const bool can_remove_interior = t.chain.size() >= 2;
    int kind = static_cast<int>(rng() % (can_remove_interior ? 6 : 5));
    size_t idx = rng() % t.chain.size();
    TamperInfo info;
    info.target_seq = t.chain[idx].seq;
    switch (kind) {
      case 0:
        t.chain[idx].action_summary = "approve wire transfer to external account";
        info.kind = "modify_summary";
        info.expected_step = 5;
        break;
      case 1:
        t.chain[idx].agent_id += "-impostor";
        info.kind = "modify_agent_id";
        info.expected_step = 5;
        break;
      case 2:
        t.chain[idx].timestamp += 1 + static_cast<int64_t>(rng() % 1000);
        info.kind = "modify_timestamp";
        info.expected_step = 5;
        break;
      case 3: {
        auto sig = crypto::signature_from_b64url(t.chain[idx].hop_signature);
        sig->bytes[rng() % 64] ^= static_cast<uint8_t>(1u << (rng() % 8));
        t.chain[idx].hop_signature = crypto::b64url_of_signature(*sig);
        info.kind = "corrupt_hop_signature";
        info.expected_step = 5;
        break;
      }
      case 4:
        t.chain[idx].seq += 1 + static_cast<int64_t>(rng() % 5);
        info.kind = "modify_seq";
        info.expected_step = 4;
        break;
      default: {
        idx = rng() % (t.chain.size() - 1);  // interior only; truncation is undetectable
        info.target_seq = t.chain[idx].seq;
        t.chain.erase(t.chain.begin() + static_cast<std::ptrdiff_t>(idx));
        info.kind = "remove_hop";
        info.expected_step = 4;
        break;
      }
    }
    current = std::move(t);
    tamper = info;
    record(agent.agent_id, "tamper", info.kind + " at seq " + std::to_string(info.target_seq));
  }

  void act_replay(const SimulatedAgent& agent) {
    // a valid token captured from an earlier session, replayed here
    std::string prior_session = "prior-" + std::to_string(rng() % 100000);
    IssueRequest req = request_from_rng(rng, prior_session, clock - 60000);
    Token captured = issue(req, issuer, uuid_from_rng(rng));
    size_t hops = rng() % 3;
    for (size_t i = 1; i <= hops; ++i) {
      HopRequest hop;
      hop.agent_id = "prior-agent-" + std::to_string(i);
      hop.agent_type = "worker";
      hop.action_summary = "prior-session step " + std::to_string(i);
      hop.now = clock - 60000 + static_cast<int64_t>(i);
      captured = extend(captured, hop, issuer, clock - 60000);
    }
    current = captured;
    record(agent.agent_id, "replay",
           "substitutes a token captured from session \"" + prior_session + "\"");
  }

  PipelineResult finish() {
    PipelineResult result;
    result.token_present = current.has_value();
    if (current) {
      result.terminal_report = verify_token(*current, ctx);
      result.chain_length = current->chain.size();
      record("terminal", "verify", result.terminal_report->summary());
      record("terminal", result.terminal_report->passed ? "execute" : "refuse",
             result.terminal_report->passed ? "provenance verified; executing action"
                                            : "provenance check failed; refusing action");
    } else {
      record("terminal", "observe", "no token present");
      record("terminal", "refuse", "no delegation record; action is unauthorized");
    }
    result.transcript = std::move(transcript);
    result.tamper = tamper;
    return result;
  }
};

}  // namespace

const char* scenario_name(Scenario s) noexcept {
  switch (s) {
    case Scenario::S1: return "S1";
    case Scenario::S2: return "S2";
    case Scenario::S3: return "S3";
    case Scenario::S4: return "S4";
  }
  return "?";
}

std::optional<Scenario> scenario_from_name(std::string_view name) noexcept {
  if (name == "S1" || name == "s1") return Scenario::S1;
  if (name == "S2" || name == "s2") return Scenario::S2;
  if (name == "S3" || name == "s3") return Scenario::S3;
  if (name == "S4" || name == "s4") return Scenario::S4;
  return std::nullopt;
}

PipelineResult run_pipeline(std::span<const SimulatedAgent> agents, const crypto::KeyPair& issuer,
                            const std::string& session_id, int64_t clock, uint64_t seed) {
  Sim sim(issuer, session_id, clock, seed);
  sim.issue_token();
  for (const SimulatedAgent& agent : agents) sim.act(agent);
  return sim.finish();
}

ScenarioReport run_scenario(Scenario scenario, uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  crypto::KeyPair issuer = key_from_rng(rng, "issuer");
  std::string session_id = "sess-" + std::to_string(rng() % 1000000);

  Behavior misbehavior = Behavior::DropsToken;
  switch (scenario) {
    case Scenario::S1: misbehavior = Behavior::DropsToken; break;
    case Scenario::S2: misbehavior = Behavior::ForgesToken; break;
    case Scenario::S3: misbehavior = Behavior::TampersHop; break;
    case Scenario::S4: misbehavior = Behavior::ReplaysPriorSession; break;
  }

  // 2..6 honest agents ahead of the attacker (S3 needs >= 2 hops to give
  // every tamper kind a target), 0..3 after.
  size_t before = 2 + rng() % 5;
  size_t after = rng() % 4;
  std::vector<SimulatedAgent> agents;
  for (size_t i = 0; i < before; ++i) {
    agents.push_back({"agent-" + std::to_string(i + 1),
                      i == 0 ? "orchestrator" : "worker", Behavior::Honest});
  }
  agents.push_back({"attacker", "worker", misbehavior});
  for (size_t i = 0; i < after; ++i) {
    agents.push_back({"agent-" + std::to_string(before + 1 + i), "worker", Behavior::Honest});
  }

  PipelineResult result = run_pipeline(agents, issuer, session_id, kSimClock, rng());

  ScenarioReport report;
  report.scenario = scenario;
  report.transcript = std::move(result.transcript);

  switch (scenario) {
    case Scenario::S1:
      report.expected_signal = "no token present";
      report.detected = !result.token_present;
      report.detection_signal = result.token_present ? "token unexpectedly present"
                                                     : "no token present";
      return report;
    case Scenario::S2: report.expected_signal = "failed_step=3"; break;
    case Scenario::S3:
      report.expected_signal =
          "failed_step=" + std::to_string(result.tamper ? result.tamper->expected_step : 0);
      break;
    case Scenario::S4: report.expected_signal = "failed_step=7"; break;
  }

  if (!result.terminal_report || result.terminal_report->passed) {
    report.detected = false;
    report.detection_signal = result.token_present ? "verification passed" : "no token present";
    return report;
  }
  report.detection_signal =
      "failed_step=" + std::to_string(result.terminal_report->failed_step.value_or(0));
  report.detected = report.detection_signal == report.expected_signal;
  // hop mutations must also be attributed to the tampered hop itself
  if (report.detected && scenario == Scenario::S3 && result.tamper &&
      result.tamper->expected_step == 5) {
    report.detected = result.terminal_report->failing_hop_seq == result.tamper->target_seq;
  }
  return report;
}

json::Value to_json(const PipelineEvent& event) {
  json::Object obj;
  obj.emplace("index", json::Value(int64_t(event.index)));
  obj.emplace("actor", event.actor);
  obj.emplace("event", event.event);
  obj.emplace("detail", event.detail);
  if (event.token) obj.emplace("token", *event.token);
  return json::Value(std::move(obj));
}

json::Value to_json(const ScenarioReport& report) {
  json::Object obj;
  obj.emplace("scenario", scenario_name(report.scenario));
  obj.emplace("detected", report.detected);
  obj.emplace("detection_signal", report.detection_signal);
  obj.emplace("expected_signal", report.expected_signal);
  json::Array events;
  for (const auto& e : report.transcript) events.push_back(to_json(e));
  obj.emplace("transcript", json::Value(std::move(events)));
  return json::Value(std::move(obj));
}

std::string transcript_to_jsonl(std::span<const PipelineEvent> transcript) {
  std::string out;
  for (const auto& event : transcript) {
    out += json::canonicalize(to_json(event));
    out += '\n';
  }
  return out;
}

}  // namespace hdp::harness
