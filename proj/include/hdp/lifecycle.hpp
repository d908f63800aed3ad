#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "hdp/crypto.hpp"
#include "hdp/token.hpp"

namespace hdp {

inline constexpr int64_t kDefaultTtlMs = 86'400'000;  // 24 hours

struct IssueRequest {
  Principal principal;
  Scope scope;
  std::string session_id;
  std::optional<int64_t> ttl_ms;            // default 24h
  std::optional<std::string> parent_token_id;
  int64_t now = 0;                          // injected clock, Unix ms
};

struct HopRequest {
  std::string agent_id;
  std::string agent_type;
  std::optional<std::string> agent_fingerprint;
  std::string action_summary;
  int64_t now = 0;  // hop timestamp, Unix ms
};

// Canonical bytes of {hdp, header, principal, scope, chain: []} with the
// signature field entirely absent — what the root signature covers. Requires
// an empty chain; the root is fixed at issuance.
std::string root_signing_payload(const Token& token);

// Verifier-side counterpart: same payload rebuilt from a received token,
// whatever its chain length.
std::string rebuild_root_payload(const Token& token);

// Canonical bytes of [root_sig_value, hop_1 .. hop_(n-1) with their
// hop_signature fields, new_hop without one]. The asymmetry is what chains
// each hop to the full prior history.
std::string hop_signing_payload(const std::string& root_sig_value, std::span<const Hop> prior_hops,
                                const Hop& new_hop);

// Issues a fresh token: new UUID v4 id (unless injected), issued_at = now,
// expires_at = now + ttl, empty chain, root signature under `key`.
Token issue(const IssueRequest& request, const crypto::KeyPair& key,
            const std::optional<std::string>& token_id_override = std::nullopt);

// Appends one signed hop; prior hops are untouched byte-for-byte. Refuses
// expired, maxed-out or structurally invalid tokens.
Token extend(const Token& token, const HopRequest& request, const crypto::KeyPair& key,
             int64_t clock);

// extend without the expiry/max_hops/structure guards. Exists so tests and
// the attack harness can build tokens verification must reject; regular
// callers want extend.
Token extend_unguarded(const Token& token, const HopRequest& request, const crypto::KeyPair& key);

// Fresh token whose header.parent_token_id records the prior token, covered
// by the new root signature.
Token reauthorize(const Token& prior, const IssueRequest& request, const crypto::KeyPair& key,
                  const std::optional<std::string>& token_id_override = std::nullopt);

// Drops the principal for privacy-preserving audit storage.
AuditRecord strip_for_audit(const Token& token);

}  // namespace hdp
