#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdp/canonical_json.hpp"

namespace hdp {

inline constexpr const char* kProtocolVersion = "0.1";
inline constexpr int64_t kMaxTimestampMs = 9007199254740992;  // 2^53, JCS-safe bound

struct Header {
  std::string token_id;
  int64_t issued_at = 0;
  int64_t expires_at = 0;
  std::string session_id;
  std::string version = kProtocolVersion;
  std::optional<std::string> parent_token_id;

  friend bool operator==(const Header&, const Header&) = default;
};

struct Principal {
  std::string id;
  std::string id_type = "opaque";  // opaque | email | uuid | did | poh
  std::optional<std::string> display_name;
  std::optional<std::string> poh_credential;

  friend bool operator==(const Principal&, const Principal&) = default;
};

struct Scope {
  std::string intent;
  std::string data_classification = "internal";  // public | internal | confidential | restricted
  bool network_egress = false;
  bool persistence = false;
  std::optional<std::vector<std::string>> authorized_tools;
  std::optional<std::vector<std::string>> authorized_resources;
  std::optional<int64_t> max_hops;

  friend bool operator==(const Scope&, const Scope&) = default;
};

// One delegation record. hop_signature is the base64url Ed25519 signature
// over [root_sig, prior hops with signatures, this hop without]; empty only
// while the hop is being built.
struct Hop {
  int64_t seq = 0;
  std::string agent_id;
  std::string agent_type;
  std::optional<std::string> agent_fingerprint;
  int64_t timestamp = 0;
  std::string action_summary;
  int64_t parent = 0;
  std::string hop_signature;

  friend bool operator==(const Hop&, const Hop&) = default;
};

struct SignatureBlock {
  std::string kid;
  std::string alg = "Ed25519";
  std::string value;  // base64url, 64 bytes decoded

  friend bool operator==(const SignatureBlock&, const SignatureBlock&) = default;
};

struct Token {
  std::string hdp = kProtocolVersion;
  Header header;
  Principal principal;
  Scope scope;
  std::vector<Hop> chain;
  SignatureBlock signature;

  friend bool operator==(const Token&, const Token&) = default;
};

// Privacy-stripped token for audit pipelines: no principal, and a distinct
// type so it cannot reach signature verification.
struct AuditRecord {
  std::string hdp;
  Header header;
  Scope scope;
  std::vector<Hop> chain;
  SignatureBlock signature;

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

struct StructuralViolation {
  enum class Code {
    VersionMismatch,
    BadTokenId,
    BadTimestampOrder,
    TimestampOutOfRange,
    EmptyPrincipalId,
    BadIdType,
    EmptyIntent,
    BadClassification,
    BadMaxHops,
    SeqGap,
    BadParent,
    BadSignatureEncoding,
    BadAlg,
  };
  Code code;
  std::string field;
  std::string message;
};

const char* violation_name(StructuralViolation::Code code) noexcept;

// Every violated invariant, in field order; empty means structurally valid.
// Total over arbitrary in-memory tokens and does no cryptography.
std::vector<StructuralViolation> validate_structure(const Token& token);

json::Value to_json(const Token& token);
Token token_from_json(const json::Value& value);

json::Value to_json(const Hop& hop, bool include_signature = true);
Hop hop_from_json(const json::Value& value);

json::Value to_json(const Principal& principal);
Principal principal_from_json(const json::Value& value);

json::Value to_json(const Scope& scope);
Scope scope_from_json(const json::Value& value);

json::Value to_json(const AuditRecord& record);
AuditRecord audit_record_from_json(const json::Value& value);

// Canonical byte forms used on the wire and in stores.
std::string canonical_bytes(const Token& token);

bool is_uuid(std::string_view s) noexcept;
bool is_uuid_v4(std::string_view s) noexcept;
std::string random_uuid_v4();

bool is_valid_id_type(std::string_view s) noexcept;
bool is_valid_classification(std::string_view s) noexcept;

}  // namespace hdp
