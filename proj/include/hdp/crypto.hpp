#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdp/canonical_json.hpp"
#include "hdp/errors.hpp"

namespace hdp::crypto {

inline constexpr const char* kAlgName = "Ed25519";

struct PublicKey {
  std::array<uint8_t, 32> bytes{};
  std::string kid;

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct Signature {
  std::array<uint8_t, 64> bytes{};

  friend bool operator==(const Signature&, const Signature&) = default;
};

// Ed25519 signing key held in RFC 8032 seed form. kid is an opaque
// caller-chosen identifier.
class KeyPair {
 public:
  // Random key when seed is absent; deterministic otherwise.
  static KeyPair generate(std::string kid);
  static KeyPair from_seed(std::string kid, std::span<const uint8_t> seed);

  const std::array<uint8_t, 32>& seed() const noexcept { return seed_; }
  PublicKey public_key() const { return PublicKey{public_, kid_}; }
  const std::string& kid() const noexcept { return kid_; }

  Signature sign(std::span<const uint8_t> message) const;
  Signature sign(std::string_view message) const;

 private:
  KeyPair() = default;
  std::array<uint8_t, 32> seed_{};
  std::array<uint8_t, 32> public_{};
  std::string kid_;
};

// True iff sig is a valid Ed25519 signature of message under key. Never
// throws; bad input is just false.
bool verify(const PublicKey& key, std::span<const uint8_t> message, const Signature& sig) noexcept;
bool verify(const PublicKey& key, std::string_view message, const Signature& sig) noexcept;

// RFC 4648 base64url without padding. Decode is strict: padding characters,
// out-of-alphabet bytes, impossible lengths and non-canonical trailing bits
// are all InvalidBase64Url.
std::string b64url_encode(std::span<const uint8_t> bytes);
std::vector<uint8_t> b64url_decode(std::string_view text);

std::string b64url_of_signature(const Signature& sig);
std::optional<Signature> signature_from_b64url(std::string_view text) noexcept;

// Key file documents: {"kid", "alg": "Ed25519", "seed", "public_key"}; the
// public variant omits "seed".
json::Value keypair_to_json(const KeyPair& key);
json::Value public_key_to_json(const PublicKey& key);
KeyPair keypair_from_json(const json::Value& doc);
PublicKey public_key_from_json(const json::Value& doc);

// Fills out with cryptographically secure random bytes.
void random_bytes(std::span<uint8_t> out);

}  // namespace hdp::crypto
