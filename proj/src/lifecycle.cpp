#include "hdp/lifecycle.hpp"

namespace hdp {

namespace {

std::string violations_summary(const std::vector<StructuralViolation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.message;
  }
  return out;
}

// Root payload over the token's signed issuance fields, chain forced empty.
std::string root_payload_of(const Token& token) {
  json::Value full = to_json(token);
  json::Object& obj = full.as_object();
  obj.erase("signature");
  obj.insert_or_assign("chain", json::Array{});
  return json::canonicalize(full);
}

Token build_unsigned(const IssueRequest& request, const crypto::KeyPair& key,
                     const std::optional<std::string>& token_id_override) {
  Token t;
  t.hdp = kProtocolVersion;
  t.header.token_id = token_id_override ? *token_id_override : random_uuid_v4();
  t.header.issued_at = request.now;
  int64_t ttl = request.ttl_ms.value_or(kDefaultTtlMs);
  if (ttl < 1) throw Error(Errc::InvalidRequest, "ttl_ms must be >= 1");
  t.header.expires_at = request.now + ttl;
  t.header.session_id = request.session_id;
  t.header.version = kProtocolVersion;
  t.header.parent_token_id = request.parent_token_id;
  t.principal = request.principal;
  t.scope = request.scope;
  t.signature.kid = key.kid();
  t.signature.alg = crypto::kAlgName;
  t.signature.value.clear();
  return t;
}

}  // namespace

std::string root_signing_payload(const Token& token) {
  if (!token.chain.empty()) {
    throw Error(Errc::ChainNotEmpty,
                "root payload is defined over an empty chain; token has " +
                    std::to_string(token.chain.size()) + " hop(s)");
  }
  return root_payload_of(token);
}

std::string rebuild_root_payload(const Token& token) { return root_payload_of(token); }

std::string hop_signing_payload(const std::string& root_sig_value, std::span<const Hop> prior_hops,
                                const Hop& new_hop) {
  if (!new_hop.hop_signature.empty()) {
    throw Error(Errc::NewHopAlreadySigned, "new hop must not carry a hop_signature");
  }
  json::Array payload;
  payload.emplace_back(root_sig_value);
  for (size_t i = 0; i < prior_hops.size(); ++i) {
    if (prior_hops[i].hop_signature.empty()) {
      throw Error(Errc::PriorHopUnsigned, "prior hop " + std::to_string(i + 1) + " is unsigned");
    }
    payload.push_back(to_json(prior_hops[i], /*include_signature=*/true));
  }
  payload.push_back(to_json(new_hop, /*include_signature=*/false));
  return json::canonicalize(json::Value(std::move(payload)));
}

Token issue(const IssueRequest& request, const crypto::KeyPair& key,
            const std::optional<std::string>& token_id_override) {
  Token t = build_unsigned(request, key, token_id_override);
  // validate with a placeholder signature; the real one replaces it below
  t.signature.value = crypto::b64url_encode(std::array<uint8_t, 64>{});
  if (auto violations = validate_structure(t); !violations.empty()) {
    throw Error(Errc::InvalidRequest, violations_summary(violations));
  }
  t.signature.value = crypto::b64url_of_signature(key.sign(root_signing_payload(t)));
  return t;
}

namespace {

Token append_hop(const Token& token, const HopRequest& request, const crypto::KeyPair& key) {
  if (request.agent_id.empty()) throw Error(Errc::InvalidRequest, "agent_id must be non-empty");
  if (request.action_summary.empty()) {
    throw Error(Errc::InvalidRequest, "action_summary must be non-empty");
  }
  Token out = token;
  Hop hop;
  hop.seq = static_cast<int64_t>(token.chain.size()) + 1;
  hop.parent = hop.seq - 1;  // 0 for the first hop: the root human authorization
  hop.agent_id = request.agent_id;
  hop.agent_type = request.agent_type;
  hop.agent_fingerprint = request.agent_fingerprint;
  hop.timestamp = request.now;
  hop.action_summary = request.action_summary;
  std::string payload = hop_signing_payload(token.signature.value, token.chain, hop);
  hop.hop_signature = crypto::b64url_of_signature(key.sign(payload));
  out.chain.push_back(std::move(hop));
  return out;
}

}  // namespace

Token extend(const Token& token, const HopRequest& request, const crypto::KeyPair& key,
             int64_t clock) {
  if (auto violations = validate_structure(token); !violations.empty()) {
    throw Error(Errc::StructurallyInvalid, violations_summary(violations));
  }
  if (clock >= token.header.expires_at) {
    throw Error(Errc::TokenExpired, "token expired at " + std::to_string(token.header.expires_at) +
                                        ", clock is " + std::to_string(clock));
  }
  if (token.scope.max_hops &&
      static_cast<int64_t>(token.chain.size()) >= *token.scope.max_hops) {
    throw Error(Errc::MaxHopsReached,
                "chain already holds max_hops = " + std::to_string(*token.scope.max_hops));
  }
  return append_hop(token, request, key);
}

Token extend_unguarded(const Token& token, const HopRequest& request,
                       const crypto::KeyPair& key) {
  return append_hop(token, request, key);
}

Token reauthorize(const Token& prior, const IssueRequest& request, const crypto::KeyPair& key,
                  const std::optional<std::string>& token_id_override) {
  if (auto violations = validate_structure(prior); !violations.empty()) {
    throw Error(Errc::StructurallyInvalid, violations_summary(violations));
  }
  IssueRequest linked = request;
  linked.parent_token_id = prior.header.token_id;
  return issue(linked, key, token_id_override);
}

AuditRecord strip_for_audit(const Token& token) {
  return AuditRecord{token.hdp, token.header, token.scope, token.chain, token.signature};
}

}  // namespace hdp
