#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdp/crypto.hpp"
#include "hdp/token.hpp"
#include "hdp/verify.hpp"

namespace hdp::harness {

// What an agent in the simulated pipeline does with the token it receives.
enum class Behavior {
  Honest,               // verify, extend, forward
  DropsToken,           // forwards the task with no token (S1)
  ForgesToken,          // substitutes a token signed by a non-issuer key (S2)
  TampersHop,           // mutates or removes an existing hop (S3)
  ReplaysPriorSession,  // substitutes a captured token from another session (S4)
};

enum class Scenario { S1, S2, S3, S4 };

const char* scenario_name(Scenario s) noexcept;
std::optional<Scenario> scenario_from_name(std::string_view name) noexcept;

struct SimulatedAgent {
  std::string agent_id;
  std::string agent_type = "worker";
  Behavior behavior = Behavior::Honest;
};

struct PipelineEvent {
  int index = 0;                     // event order
  std::string actor;                 // issuer, agent id, or terminal
  std::string event;                 // issue / verify / extend / drop / forge / tamper / ...
  std::string detail;
  std::optional<std::string> token;  // canonical bytes after the event, absent if dropped
};

struct TamperInfo {
  std::string kind;      // modify_summary, modify_agent_id, ..., remove_hop, modify_seq
  int64_t target_seq = 0;
  int expected_step = 0;  // 5 for field/signature mutations, 4 for seq/removal
};

struct PipelineResult {
  std::vector<PipelineEvent> transcript;
  bool token_present = false;                        // a token reached the terminal agent
  std::optional<VerificationReport> terminal_report;  // terminal verify, when present
  size_t chain_length = 0;
  std::optional<TamperInfo> tamper;                  // set when a TampersHop agent acted
};

// Orchestrator-to-tool pipeline simulation: a token is issued for the
// session, then each agent acts per its behavior; the last state is verified
// as the terminal tool-execution check. Misbehavior is data, never an error.
// Deterministic for a given seed; "executing" only appends to the transcript.
PipelineResult run_pipeline(std::span<const SimulatedAgent> agents, const crypto::KeyPair& issuer,
                            const std::string& session_id, int64_t clock, uint64_t seed = 0);

struct ScenarioReport {
  Scenario scenario = Scenario::S1;
  bool detected = false;
  std::string detection_signal;  // e.g. "no token present", "failed_step=3"
  std::string expected_signal;
  std::vector<PipelineEvent> transcript;
};

// Runs one randomized parameterization of an attack scenario:
//   S1 no token -> "no token present"     S2 forged token  -> failed_step=3
//   S3 tampered chain -> failed_step=5|4  S4 session replay -> failed_step=7
ScenarioReport run_scenario(Scenario scenario, uint64_t seed);

json::Value to_json(const PipelineEvent& event);
json::Value to_json(const ScenarioReport& report);

// One JSON object per line, replayable under the same seed.
std::string transcript_to_jsonl(std::span<const PipelineEvent> transcript);

}  // namespace hdp::harness
