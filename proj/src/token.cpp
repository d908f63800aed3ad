#include "hdp/token.hpp"

#include <array>
#include <set>

#include "hdp/crypto.hpp"

namespace hdp {

namespace {

bool is_hex(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

bool decodes_to_64_bytes(const std::string& b64) {
  return crypto::signature_from_b64url(b64).has_value();
}

bool timestamp_in_range(int64_t t) { return t >= 0 && t < kMaxTimestampMs; }

// Strict reader over a JSON object: every key must be consumed, required
// fields must exist, and ints must be integral doubles.
class ObjectReader {
 public:
  ObjectReader(const json::Value& v, std::string context) : context_(std::move(context)) {
    if (!v.is_object()) {
      throw Error(Errc::WrongFieldType, context_ + " must be an object");
    }
    obj_ = &v.as_object();
  }

  const json::Value* find(const char* name) {
    auto it = obj_->find(name);
    if (it == obj_->end()) return nullptr;
    seen_.insert(it->first);
    return &it->second;
  }

  const json::Value& require(const char* name) {
    const json::Value* v = find(name);
    if (v == nullptr) throw Error(Errc::MissingField, qualify(name));
    return *v;
  }

  std::string require_string(const char* name) { return string_of(require(name), name); }

  bool require_bool(const char* name) {
    const json::Value& v = require(name);
    if (!v.is_bool()) throw Error(Errc::WrongFieldType, qualify(name) + " must be a boolean");
    return v.as_bool();
  }

  int64_t require_int(const char* name) { return int_of(require(name), name); }

  std::optional<std::string> optional_string(const char* name) {
    const json::Value* v = find(name);
    if (v == nullptr) return std::nullopt;
    return string_of(*v, name);
  }

  std::optional<int64_t> optional_int(const char* name) {
    const json::Value* v = find(name);
    if (v == nullptr) return std::nullopt;
    return int_of(*v, name);
  }

  std::optional<std::vector<std::string>> optional_string_array(const char* name) {
    const json::Value* v = find(name);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array()) throw Error(Errc::WrongFieldType, qualify(name) + " must be an array");
    std::vector<std::string> out;
    for (const json::Value& e : v->as_array()) out.push_back(string_of(e, name));
    return out;
  }

  // Rejects any key not consumed by the calls above.
  void finish() {
    for (const auto& [key, value] : *obj_) {
      if (!seen_.contains(key)) throw Error(Errc::UnknownField, qualify(key.c_str()));
    }
  }

 private:
  std::string qualify(const char* name) const {
    return context_.empty() ? std::string(name) : context_ + "." + name;
  }

  std::string string_of(const json::Value& v, const char* name) const {
    if (!v.is_string()) throw Error(Errc::WrongFieldType, qualify(name) + " must be a string");
    return v.as_string();
  }

  int64_t int_of(const json::Value& v, const char* name) const {
    if (!v.is_number()) throw Error(Errc::WrongFieldType, qualify(name) + " must be a number");
    double d = v.as_number();
    int64_t i = static_cast<int64_t>(d);
    if (static_cast<double>(i) != d) {
      throw Error(Errc::WrongFieldType, qualify(name) + " must be an integer");
    }
    return i;
  }

  const json::Object* obj_ = nullptr;
  std::set<std::string> seen_;
  std::string context_;
};

json::Value header_to_json(const Header& h) {
  json::Object obj;
  obj.emplace("token_id", h.token_id);
  obj.emplace("issued_at", json::Value(h.issued_at));
  obj.emplace("expires_at", json::Value(h.expires_at));
  obj.emplace("session_id", h.session_id);
  obj.emplace("version", h.version);
  if (h.parent_token_id) obj.emplace("parent_token_id", *h.parent_token_id);
  return json::Value(std::move(obj));
}

Header header_from_json(const json::Value& v) {
  ObjectReader r(v, "header");
  Header h;
  h.token_id = r.require_string("token_id");
  h.issued_at = r.require_int("issued_at");
  h.expires_at = r.require_int("expires_at");
  h.session_id = r.require_string("session_id");
  h.version = r.require_string("version");
  h.parent_token_id = r.optional_string("parent_token_id");
  r.finish();
  return h;
}

json::Value principal_to_json_impl(const Principal& p) {
  json::Object obj;
  obj.emplace("id", p.id);
  obj.emplace("id_type", p.id_type);
  if (p.display_name) obj.emplace("display_name", *p.display_name);
  if (p.poh_credential) obj.emplace("poh_credential", *p.poh_credential);
  return json::Value(std::move(obj));
}

Principal principal_from_json_impl(const json::Value& v) {
  ObjectReader r(v, "principal");
  Principal p;
  p.id = r.require_string("id");
  p.id_type = r.require_string("id_type");
  p.display_name = r.optional_string("display_name");
  p.poh_credential = r.optional_string("poh_credential");
  r.finish();
  return p;
}

json::Value scope_to_json_impl(const Scope& s) {
  json::Object obj;
  obj.emplace("intent", s.intent);
  obj.emplace("data_classification", s.data_classification);
  obj.emplace("network_egress", s.network_egress);
  obj.emplace("persistence", s.persistence);
  auto string_array = [](const std::vector<std::string>& items) {
    json::Array arr;
    for (const auto& item : items) arr.emplace_back(item);
    return json::Value(std::move(arr));
  };
  if (s.authorized_tools) obj.emplace("authorized_tools", string_array(*s.authorized_tools));
  if (s.authorized_resources) {
    obj.emplace("authorized_resources", string_array(*s.authorized_resources));
  }
  if (s.max_hops) obj.emplace("max_hops", json::Value(*s.max_hops));
  return json::Value(std::move(obj));
}

Scope scope_from_json_impl(const json::Value& v) {
  ObjectReader r(v, "scope");
  Scope s;
  s.intent = r.require_string("intent");
  s.data_classification = r.require_string("data_classification");
  s.network_egress = r.require_bool("network_egress");
  s.persistence = r.require_bool("persistence");
  s.authorized_tools = r.optional_string_array("authorized_tools");
  s.authorized_resources = r.optional_string_array("authorized_resources");
  s.max_hops = r.optional_int("max_hops");
  r.finish();
  return s;
}

json::Value signature_to_json(const SignatureBlock& s) {
  json::Object obj;
  obj.emplace("kid", s.kid);
  obj.emplace("alg", s.alg);
  obj.emplace("value", s.value);
  return json::Value(std::move(obj));
}

SignatureBlock signature_from_json(const json::Value& v) {
  ObjectReader r(v, "signature");
  SignatureBlock s;
  s.kid = r.require_string("kid");
  s.alg = r.require_string("alg");
  s.value = r.require_string("value");
  r.finish();
  return s;
}

}  // namespace

const char* violation_name(StructuralViolation::Code code) noexcept {
  using Code = StructuralViolation::Code;
  switch (code) {
    case Code::VersionMismatch: return "VersionMismatch";
    case Code::BadTokenId: return "BadTokenId";
    case Code::BadTimestampOrder: return "BadTimestampOrder";
    case Code::TimestampOutOfRange: return "TimestampOutOfRange";
    case Code::EmptyPrincipalId: return "EmptyPrincipalId";
    case Code::BadIdType: return "BadIdType";
    case Code::EmptyIntent: return "EmptyIntent";
    case Code::BadClassification: return "BadClassification";
    case Code::BadMaxHops: return "BadMaxHops";
    case Code::SeqGap: return "SeqGap";
    case Code::BadParent: return "BadParent";
    case Code::BadSignatureEncoding: return "BadSignatureEncoding";
    case Code::BadAlg: return "BadAlg";
  }
  return "Unknown";
}

bool is_uuid(std::string_view s) noexcept {
  if (s.size() != 36) return false;
  for (size_t i = 0; i < 36; ++i) {
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (s[i] != '-') return false;
    } else if (!is_hex(s[i])) {
      return false;
    }
  }
  return true;
}

bool is_uuid_v4(std::string_view s) noexcept {
  if (!is_uuid(s)) return false;
  if (s[14] != '4') return false;
  char variant = s[19];
  return variant == '8' || variant == '9' || variant == 'a' || variant == 'b' ||
         variant == 'A' || variant == 'B';
}

std::string random_uuid_v4() {
  std::array<uint8_t, 16> bytes;
  crypto::random_bytes(bytes);
  bytes[6] = static_cast<uint8_t>((bytes[6] & 0x0F) | 0x40);
  bytes[8] = static_cast<uint8_t>((bytes[8] & 0x3F) | 0x80);
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(36);
  for (size_t i = 0; i < 16; ++i) {
    if (i == 4 || i == 6 || i == 8 || i == 10) out += '-';
    out += digits[bytes[i] >> 4];
    out += digits[bytes[i] & 0xF];
  }
  return out;
}

bool is_valid_id_type(std::string_view s) noexcept {
  return s == "opaque" || s == "email" || s == "uuid" || s == "did" || s == "poh";
}

bool is_valid_classification(std::string_view s) noexcept {
  return s == "public" || s == "internal" || s == "confidential" || s == "restricted";
}

std::vector<StructuralViolation> validate_structure(const Token& token) {
  using Code = StructuralViolation::Code;
  std::vector<StructuralViolation> out;
  auto add = [&](Code code, std::string field, std::string message) {
    out.push_back(StructuralViolation{code, std::move(field), std::move(message)});
  };

  if (token.hdp != token.header.version) {
    add(Code::VersionMismatch, "header.version",
        "header.version \"" + token.header.version + "\" differs from top-level hdp \"" +
            token.hdp + "\"");
  }
  if (!is_uuid_v4(token.header.token_id)) {
    add(Code::BadTokenId, "header.token_id", "token_id is not a UUID v4");
  }
  if (!timestamp_in_range(token.header.issued_at)) {
    add(Code::TimestampOutOfRange, "header.issued_at", "issued_at outside [0, 2^53)");
  }
  if (!timestamp_in_range(token.header.expires_at)) {
    add(Code::TimestampOutOfRange, "header.expires_at", "expires_at outside [0, 2^53)");
  }
  if (token.header.issued_at >= token.header.expires_at) {
    add(Code::BadTimestampOrder, "header.expires_at", "issued_at must precede expires_at");
  }

  if (token.principal.id.empty()) {
    add(Code::EmptyPrincipalId, "principal.id", "principal.id must be non-empty");
  }
  if (!is_valid_id_type(token.principal.id_type)) {
    add(Code::BadIdType, "principal.id_type",
        "id_type \"" + token.principal.id_type + "\" is not one of opaque/email/uuid/did/poh");
  }

  if (token.scope.intent.empty()) {
    add(Code::EmptyIntent, "scope.intent", "scope.intent must be non-empty");
  }
  if (!is_valid_classification(token.scope.data_classification)) {
    add(Code::BadClassification, "scope.data_classification",
        "data_classification \"" + token.scope.data_classification +
            "\" is not one of public/internal/confidential/restricted");
  }
  if (token.scope.max_hops && *token.scope.max_hops < 1) {
    add(Code::BadMaxHops, "scope.max_hops", "max_hops must be >= 1");
  }

  for (size_t i = 0; i < token.chain.size(); ++i) {
    const Hop& hop = token.chain[i];
    const std::string field = "chain[" + std::to_string(i) + "]";
    const int64_t expected_seq = static_cast<int64_t>(i) + 1;
    if (hop.seq != expected_seq) {
      add(Code::SeqGap, field + ".seq",
          "seq " + std::to_string(hop.seq) + " where " + std::to_string(expected_seq) +
              " was required (gaps in seq are a protocol violation)");
    }
    if (hop.seq == 1 && hop.parent != 0) {
      add(Code::BadParent, field + ".parent", "first hop must have parent 0");
    } else if (hop.parent < 0 || hop.parent >= hop.seq) {
      add(Code::BadParent, field + ".parent",
          "parent " + std::to_string(hop.parent) + " must reference an earlier hop");
    }
    if (!timestamp_in_range(hop.timestamp)) {
      add(Code::TimestampOutOfRange, field + ".timestamp", "timestamp outside [0, 2^53)");
    }
    if (!decodes_to_64_bytes(hop.hop_signature)) {
      add(Code::BadSignatureEncoding, field + ".hop_signature",
          "hop_signature must be base64url of 64 bytes");
    }
  }

  if (token.signature.alg != crypto::kAlgName) {
    add(Code::BadAlg, "signature.alg", "alg must be Ed25519");
  }
  if (!decodes_to_64_bytes(token.signature.value)) {
    add(Code::BadSignatureEncoding, "signature.value",
        "signature.value must be base64url of 64 bytes");
  }
  return out;
}

json::Value to_json(const Hop& hop, bool include_signature) {
  json::Object obj;
  obj.emplace("seq", json::Value(hop.seq));
  obj.emplace("agent_id", hop.agent_id);
  obj.emplace("agent_type", hop.agent_type);
  if (hop.agent_fingerprint) obj.emplace("agent_fingerprint", *hop.agent_fingerprint);
  obj.emplace("timestamp", json::Value(hop.timestamp));
  obj.emplace("action_summary", hop.action_summary);
  obj.emplace("parent", json::Value(hop.parent));
  if (include_signature) obj.emplace("hop_signature", hop.hop_signature);
  return json::Value(std::move(obj));
}

Hop hop_from_json(const json::Value& v) {
  ObjectReader r(v, "hop");
  Hop hop;
  hop.seq = r.require_int("seq");
  hop.agent_id = r.require_string("agent_id");
  hop.agent_type = r.require_string("agent_type");
  hop.agent_fingerprint = r.optional_string("agent_fingerprint");
  hop.timestamp = r.require_int("timestamp");
  hop.action_summary = r.require_string("action_summary");
  hop.parent = r.require_int("parent");
  hop.hop_signature = r.require_string("hop_signature");
  r.finish();
  return hop;
}

json::Value to_json(const Token& token) {
  json::Object obj;
  obj.emplace("hdp", token.hdp);
  obj.emplace("header", header_to_json(token.header));
  obj.emplace("principal", principal_to_json_impl(token.principal));
  obj.emplace("scope", scope_to_json_impl(token.scope));
  json::Array chain;
  for (const Hop& hop : token.chain) chain.push_back(to_json(hop));
  obj.emplace("chain", json::Value(std::move(chain)));
  obj.emplace("signature", signature_to_json(token.signature));
  return json::Value(std::move(obj));
}

Token token_from_json(const json::Value& v) {
  ObjectReader r(v, "");
  Token t;
  t.hdp = r.require_string("hdp");
  t.header = header_from_json(r.require("header"));
  t.principal = principal_from_json_impl(r.require("principal"));
  t.scope = scope_from_json_impl(r.require("scope"));
  const json::Value& chain = r.require("chain");
  if (!chain.is_array()) throw Error(Errc::WrongFieldType, "chain must be an array");
  for (const json::Value& hop : chain.as_array()) t.chain.push_back(hop_from_json(hop));
  t.signature = signature_from_json(r.require("signature"));
  r.finish();
  return t;
}

json::Value to_json(const AuditRecord& record) {
  json::Object obj;
  obj.emplace("hdp", record.hdp);
  obj.emplace("header", header_to_json(record.header));
  obj.emplace("scope", scope_to_json_impl(record.scope));
  json::Array chain;
  for (const Hop& hop : record.chain) chain.push_back(to_json(hop));
  obj.emplace("chain", json::Value(std::move(chain)));
  obj.emplace("signature", signature_to_json(record.signature));
  obj.emplace("audit_only", true);
  return json::Value(std::move(obj));
}

AuditRecord audit_record_from_json(const json::Value& v) {
  ObjectReader r(v, "");
  AuditRecord rec;
  rec.hdp = r.require_string("hdp");
  rec.header = header_from_json(r.require("header"));
  rec.scope = scope_from_json_impl(r.require("scope"));
  const json::Value& chain = r.require("chain");
  if (!chain.is_array()) throw Error(Errc::WrongFieldType, "chain must be an array");
  for (const json::Value& hop : chain.as_array()) rec.chain.push_back(hop_from_json(hop));
  rec.signature = signature_from_json(r.require("signature"));
  if (!r.require_bool("audit_only")) {
    throw Error(Errc::WrongFieldType, "audit_only must be true");
  }
  r.finish();
  return rec;
}

json::Value to_json(const Principal& principal) { return principal_to_json_impl(principal); }

Principal principal_from_json(const json::Value& value) { return principal_from_json_impl(value); }

json::Value to_json(const Scope& scope) { return scope_to_json_impl(scope); }

Scope scope_from_json(const json::Value& value) { return scope_from_json_impl(value); }

std::string canonical_bytes(const Token& token) { return json::canonicalize(to_json(token)); }

}  // namespace hdp
