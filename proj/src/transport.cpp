#include "hdp/transport.hpp"

#include <fstream>
#include <mutex>
#include <set>

namespace hdp::transport {

std::string encode_header_value(const Token& token) {
  std::string bytes = canonical_bytes(token);
  return crypto::b64url_encode(
      std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size()));
}

Token decode_header_value(std::string_view value) {
  auto bytes = crypto::b64url_decode(value);
  return token_from_json(
      json::parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size())));
}

TokenRefStore::TokenRefStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  if (ec) throw Error(Errc::IoError, "cannot create store directory: " + ec.message());
  for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Token token = token_from_json(json::parse(bytes));
    canonical_by_id_.insert_or_assign(token.header.token_id, canonical_bytes(token));
  }
}

std::string TokenRefStore::put(const Token& token) {
  if (auto violations = validate_structure(token); !violations.empty()) {
    throw Error(Errc::InvalidRequest,
                "refusing to store a structurally invalid token (" + violations.front().field +
                    ": " + violations.front().message + ")");
  }
  const std::string& id = token.header.token_id;
  std::string bytes = canonical_bytes(token);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = canonical_by_id_.try_emplace(id, bytes);
  if (!inserted && it->second != bytes) {
    throw Error(Errc::DuplicateTokenIdConflict,
                "a different token is already stored under token_id " + id);
  }
  if (inserted && dir_) {
    auto path = *dir_ / (id + ".json");
    auto tmp = *dir_ / (id + ".json.tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    std::filesystem::rename(tmp, path);
  }
  return id;
}

std::optional<Token> TokenRefStore::get(const std::string& token_id) const {
  std::shared_lock lock(mutex_);
  auto it = canonical_by_id_.find(token_id);
  if (it == canonical_by_id_.end()) return std::nullopt;
  return token_from_json(json::parse(it->second));
}

size_t TokenRefStore::size() const {
  std::shared_lock lock(mutex_);
  return canonical_by_id_.size();
}

json::Value render_wellknown(const std::vector<crypto::PublicKey>& keys) {
  std::set<std::string> kids;
  json::Array arr;
  for (const auto& key : keys) {
    if (!kids.insert(key.kid).second) {
      throw Error(Errc::DuplicateKid, "duplicate kid \"" + key.kid + "\"");
    }
    arr.push_back(crypto::public_key_to_json(key));
  }
  json::Object obj;
  obj.emplace("keys", json::Value(std::move(arr)));
  return json::Value(std::move(obj));
}

std::vector<crypto::PublicKey> parse_wellknown(const json::Value& doc) {
  const json::Object& obj = doc.as_object();
  auto it = obj.find("keys");
  if (it == obj.end()) throw Error(Errc::MissingField, "keys");
  std::vector<crypto::PublicKey> out;
  std::set<std::string> kids;
  for (const json::Value& entry : it->second.as_array()) {
    crypto::PublicKey key = crypto::public_key_from_json(entry);
    if (!kids.insert(key.kid).second) {
      throw Error(Errc::DuplicateKid, "duplicate kid \"" + key.kid + "\"");
    }
    out.push_back(std::move(key));
  }
  return out;
}

}  // namespace hdp::transport
