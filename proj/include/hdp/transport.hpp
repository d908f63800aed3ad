#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "hdp/crypto.hpp"
#include "hdp/token.hpp"

namespace hdp::transport {

// Wire names fixed by the protocol. Tokens must never travel in URL query
// parameters; no API here renders one into a URL.
inline constexpr const char* kTokenHeader = "X-HDP-Token";
inline constexpr const char* kTokenRefHeader = "X-HDP-Token-Ref";
inline constexpr const char* kWellKnownPath = "/.well-known/hdp-keys.json";
inline constexpr const char* kMediaType = "application/hdp-token+json";

// X-HDP-Token value: base64url of the token's canonical JSON bytes.
std::string encode_header_value(const Token& token);
Token decode_header_value(std::string_view value);

// Token-by-reference backing store for X-HDP-Token-Ref. In-memory, with
// optional persistence as a directory of <token_id>.json canonical files.
// Concurrent readers, exclusive writers; put/get are individually atomic.
class TokenRefStore {
 public:
  TokenRefStore() = default;
  explicit TokenRefStore(std::filesystem::path dir);  // loads existing entries

  // Idempotent per token_id; a different token under the same id is a
  // DuplicateTokenIdConflict. Returns the token_id.
  std::string put(const Token& token);
  std::optional<Token> get(const std::string& token_id) const;
  size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::string> canonical_by_id_;
  std::optional<std::filesystem::path> dir_;
};

// /.well-known/hdp-keys.json document: {"keys":[{kid, alg, public_key}...]}.
json::Value render_wellknown(const std::vector<crypto::PublicKey>& keys);
std::vector<crypto::PublicKey> parse_wellknown(const json::Value& doc);

}  // namespace hdp::transport
