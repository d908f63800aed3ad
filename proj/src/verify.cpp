#include "hdp/verify.hpp"

#include "hdp/lifecycle.hpp"

namespace hdp {

const char* failure_reason_name(FailureReason reason) noexcept {
  switch (reason) {
    case FailureReason::UnsupportedVersion: return "UnsupportedVersion";
    case FailureReason::Expired: return "Expired";
    case FailureReason::RootSignatureInvalid: return "RootSignatureInvalid";
    case FailureReason::UnknownKid: return "UnknownKid";
    case FailureReason::ChainSequenceViolation: return "ChainSequenceViolation";
    case FailureReason::HopSignatureInvalid: return "HopSignatureInvalid";
    case FailureReason::MaxHopsExceeded: return "MaxHopsExceeded";
    case FailureReason::SessionMismatch: return "SessionMismatch";
    case FailureReason::Malformed: return "Malformed";
  }
  return "Unknown";
}

const char* lineage_failure_name(LineageFailure failure) noexcept {
  switch (failure) {
    case LineageFailure::TokenInvalid: return "TokenInvalid";
    case LineageFailure::LinkageBroken: return "LinkageBroken";
    case LineageFailure::SessionMismatch: return "SessionMismatch";
  }
  return "Unknown";
}

std::string VerificationReport::summary() const {
  if (passed) return "pass (7 steps)";
  std::string out = "fail at step " + std::to_string(failed_step.value_or(0));
  if (reason) out += std::string(" ") + failure_reason_name(*reason);
  if (failing_hop_seq) out += " (hop seq " + std::to_string(*failing_hop_seq) + ")";
  return out;
}

namespace {

// Pipeline state: records step outcomes and freezes the first failure.
struct Pipeline {
  VerificationReport report;

  void pass(int step, std::string detail = {}) {
    report.steps_executed.push_back(StepOutcome{step, true, std::nullopt, std::move(detail)});
  }

  VerificationReport fail(int step, FailureReason reason, std::string detail,
                          std::optional<int64_t> hop_seq = std::nullopt) {
    report.steps_executed.push_back(StepOutcome{step, false, reason, detail});
    report.passed = false;
    report.failed_step = step;
    report.reason = reason;
    report.failing_hop_seq = hop_seq;
    return std::move(report);
  }

  VerificationReport finish() {
    report.passed = true;
    return std::move(report);
  }
};

}  // namespace

VerificationReport verify_token(const Token& token, const SessionContext& ctx) {
  Pipeline p;

  // step 1: version
  if (!ctx.supported_versions.contains(token.hdp)) {
    return p.fail(1, FailureReason::UnsupportedVersion,
                  "token version \"" + token.hdp + "\" is not supported");
  }
  if (token.header.version != token.hdp) {
    return p.fail(1, FailureReason::UnsupportedVersion,
                  "header.version does not mirror the top-level hdp field");
  }
  p.pass(1);

  // step 2: expiry against the verifier clock
  if (ctx.now >= token.header.expires_at + ctx.clock_skew_ms) {
    return p.fail(2, FailureReason::Expired,
                  "expired at " + std::to_string(token.header.expires_at) + ", now " +
                      std::to_string(ctx.now));
  }
  if (ctx.reject_future_issued_at && token.header.issued_at > ctx.now + ctx.clock_skew_ms) {
    return p.fail(2, FailureReason::Expired, "issued_at is in the future");
  }
  p.pass(2);

  // step 3: root signature under the issuer key named by kid
  auto key_it = ctx.issuer_keys.find(token.signature.kid);
  if (key_it == ctx.issuer_keys.end()) {
    return p.fail(3, FailureReason::UnknownKid,
                  "kid \"" + token.signature.kid + "\" is not in the verifier key set");
  }
  if (token.signature.alg != crypto::kAlgName) {
    return p.fail(3, FailureReason::RootSignatureInvalid,
                  "unsupported signature alg \"" + token.signature.alg + "\"");
  }
  auto root_sig = crypto::signature_from_b64url(token.signature.value);
  if (!root_sig) {
    return p.fail(3, FailureReason::RootSignatureInvalid,
                  "signature.value is not base64url of 64 bytes");
  }
  std::string root_payload;
  try {
    root_payload = rebuild_root_payload(token);
  } catch (const Error& e) {
    return p.fail(3, FailureReason::RootSignatureInvalid,
                  std::string("cannot rebuild canonical payload: ") + e.what());
  }
  if (!crypto::verify(key_it->second, root_payload, *root_sig)) {
    return p.fail(3, FailureReason::RootSignatureInvalid,
                  "root signature does not cover this header/principal/scope");
  }
  p.pass(3);

  // step 4: chain sequence integrity (and parent bounds, which are equally
  // structural and otherwise uncheckable once signed)
  for (size_t i = 0; i < token.chain.size(); ++i) {
    const Hop& hop = token.chain[i];
    const int64_t expected = static_cast<int64_t>(i) + 1;
    if (hop.seq != expected) {
      return p.fail(4, FailureReason::ChainSequenceViolation,
                    "hop at index " + std::to_string(i) + " has seq " + std::to_string(hop.seq) +
                        ", expected " + std::to_string(expected));
    }
    const bool parent_ok = hop.seq == 1 ? hop.parent == 0
                                        : hop.parent >= 0 && hop.parent < hop.seq;
    if (!parent_ok) {
      return p.fail(4, FailureReason::ChainSequenceViolation,
                    "hop " + std::to_string(hop.seq) + " has invalid parent " +
                        std::to_string(hop.parent));
    }
  }
  p.pass(4);

  // step 5: hop signatures, ascending, each over the reconstructed payload
  for (size_t i = 0; i < token.chain.size(); ++i) {
    const Hop& hop = token.chain[i];
    auto hop_sig = crypto::signature_from_b64url(hop.hop_signature);
    bool ok = hop_sig.has_value();
    if (ok) {
      try {
        Hop unsigned_hop = hop;
        unsigned_hop.hop_signature.clear();
        std::string payload = hop_signing_payload(
            token.signature.value, std::span<const Hop>(token.chain.data(), i), unsigned_hop);
        ok = crypto::verify(key_it->second, payload, *hop_sig);
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) {
      return p.fail(5, FailureReason::HopSignatureInvalid,
                    "hop " + std::to_string(hop.seq) + " signature invalid", hop.seq);
    }
  }
  p.pass(5);

  // step 6: max_hops budget
  if (token.scope.max_hops &&
      static_cast<int64_t>(token.chain.size()) > *token.scope.max_hops) {
    return p.fail(6, FailureReason::MaxHopsExceeded,
                  "chain length " + std::to_string(token.chain.size()) + " exceeds max_hops " +
                      std::to_string(*token.scope.max_hops));
  }
  p.pass(6);

  // step 7: session binding
  if (token.header.session_id != ctx.current_session_id) {
    return p.fail(7, FailureReason::SessionMismatch,
                  "token bound to session \"" + token.header.session_id + "\"");
  }
  p.pass(7);

  return p.finish();
}

VerificationReport verify_token_bytes(std::string_view bytes, const SessionContext& ctx) {
  Token token;
  try {
    token = token_from_json(json::parse(bytes));
  } catch (const Error& e) {
    Pipeline p;
    return p.fail(1, FailureReason::Malformed, std::string("not an HDP token: ") + e.what());
  }
  return verify_token(token, ctx);
}

LineageReport verify_lineage(std::span<const Token> tokens, const SessionContext& ctx) {
  LineageReport report;
  if (tokens.empty()) {
    report.failure = LineageFailure::LinkageBroken;
    report.broken_index = 0;
    report.detail = "lineage is empty";
    return report;
  }
  for (size_t i = 0; i < tokens.size(); ++i) {
    report.token_reports.push_back(verify_token(tokens[i], ctx));
    const VerificationReport& tr = report.token_reports.back();
    if (!tr.passed) {
      report.failure = tr.reason == FailureReason::SessionMismatch
                           ? LineageFailure::SessionMismatch
                           : LineageFailure::TokenInvalid;
      report.broken_index = i;
      report.detail =
          "token " + std::to_string(i) + " failed verification: " + tr.summary();
      return report;
    }
  }
  for (size_t i = 1; i < tokens.size(); ++i) {
    const auto& parent_id = tokens[i].header.parent_token_id;
    if (!parent_id || *parent_id != tokens[i - 1].header.token_id) {
      report.failure = LineageFailure::LinkageBroken;
      report.broken_index = i;
      report.detail = "token " + std::to_string(i) + " does not reference its predecessor";
      return report;
    }
  }
  for (size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].header.session_id != tokens[0].header.session_id) {
      report.failure = LineageFailure::SessionMismatch;
      report.broken_index = i;
      report.detail = "token " + std::to_string(i) + " was issued under a different session";
      return report;
    }
  }
  report.passed = true;
  return report;
}

PohStatus check_poh(const Token&, const SessionContext&) noexcept {
  return PohStatus::NotConfigured;
}

json::Value to_json(const VerificationReport& report) {
  json::Object obj;
  obj.emplace("passed", report.passed);
  if (report.failed_step) obj.emplace("failed_step", json::Value(int64_t(*report.failed_step)));
  if (report.reason) obj.emplace("reason", failure_reason_name(*report.reason));
  if (report.failing_hop_seq) {
    obj.emplace("failing_hop_seq", json::Value(*report.failing_hop_seq));
  }
  json::Array steps;
  for (const auto& step : report.steps_executed) {
    json::Object s;
    s.emplace("step", json::Value(int64_t(step.step)));
    s.emplace("passed", step.passed);
    if (step.reason) s.emplace("reason", failure_reason_name(*step.reason));
    if (!step.detail.empty()) s.emplace("detail", step.detail);
    steps.push_back(json::Value(std::move(s)));
  }
  obj.emplace("steps_executed", json::Value(std::move(steps)));
  return json::Value(std::move(obj));
}

json::Value to_json(const LineageReport& report) {
  json::Object obj;
  obj.emplace("passed", report.passed);
  if (report.failure) obj.emplace("failure", lineage_failure_name(*report.failure));
  if (report.broken_index) {
    obj.emplace("broken_index", json::Value(static_cast<int64_t>(*report.broken_index)));
  }
  if (!report.detail.empty()) obj.emplace("detail", report.detail);
  json::Array reports;
  for (const auto& r : report.token_reports) reports.push_back(to_json(r));
  obj.emplace("token_reports", json::Value(std::move(reports)));
  return json::Value(std::move(obj));
}

}  // namespace hdp
