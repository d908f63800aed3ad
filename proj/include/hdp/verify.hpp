#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hdp/crypto.hpp"
#include "hdp/token.hpp"

namespace hdp {

// Verifier-side trust state. Verification needs nothing else: no registry,
// no endpoint, no network.
struct SessionContext {
  std::map<std::string, crypto::PublicKey> issuer_keys;  // by kid; multiple for rotation
  std::string current_session_id;
  int64_t now = 0;  // Unix ms
  int64_t clock_skew_ms = 0;
  std::set<std::string> supported_versions{kProtocolVersion};
  // Opt-in strictness: also reject tokens issued in the future.
  bool reject_future_issued_at = false;

  void add_key(const crypto::PublicKey& key) { issuer_keys.insert_or_assign(key.kid, key); }
};

enum class FailureReason {
  UnsupportedVersion,
  Expired,
  RootSignatureInvalid,
  UnknownKid,
  ChainSequenceViolation,
  HopSignatureInvalid,
  MaxHopsExceeded,
  SessionMismatch,
  Malformed,
};

const char* failure_reason_name(FailureReason reason) noexcept;

struct StepOutcome {
  int step = 0;
  bool passed = false;
  std::optional<FailureReason> reason;
  std::string detail;
};

struct VerificationReport {
  bool passed = false;
  std::optional<int> failed_step;
  std::optional<FailureReason> reason;
  std::optional<int64_t> failing_hop_seq;  // set for HopSignatureInvalid
  std::vector<StepOutcome> steps_executed;

  std::string summary() const;
};

json::Value to_json(const VerificationReport& report);

// The seven ordered checks, short-circuiting at the first failure:
//   1 version  2 expiry  3 root signature  4 chain sequence
//   5 hop signatures  6 max_hops  7 session binding
// Failures are report values, never exceptions, and no I/O happens here.
VerificationReport verify_token(const Token& token, const SessionContext& ctx);

// Same pipeline over raw bytes; anything that fails to parse or load as a
// token (including audit-only records) is Malformed at step 1.
VerificationReport verify_token_bytes(std::string_view bytes, const SessionContext& ctx);

enum class LineageFailure {
  TokenInvalid,
  LinkageBroken,
  SessionMismatch,
};

const char* lineage_failure_name(LineageFailure failure) noexcept;

struct LineageReport {
  bool passed = false;
  std::vector<VerificationReport> token_reports;  // one per token, oldest first
  std::optional<size_t> broken_index;
  std::optional<LineageFailure> failure;
  std::string detail;
};

json::Value to_json(const LineageReport& report);

// Re-authorization lineage (oldest first): each token must verify, each
// parent_token_id must point at its predecessor, and all tokens must share
// one session.
LineageReport verify_lineage(std::span<const Token> tokens, const SessionContext& ctx);

// Optional eighth step. Proof-of-Humanity validation is not configured in
// this build; the pipeline above never calls it.
enum class PohStatus { NotConfigured };
PohStatus check_poh(const Token& token, const SessionContext& ctx) noexcept;

}  // namespace hdp
