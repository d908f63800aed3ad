#include "hdp/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>

namespace hdp::crypto {

namespace {

void ensure_sodium() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (sodium_init() < 0) throw Error(Errc::IoError, "libsodium initialization failed");
  });
}

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

// 64-byte libsodium secret key is seed || public key.
std::array<uint8_t, 64> secret_key_of(const std::array<uint8_t, 32>& seed,
                                      const std::array<uint8_t, 32>& pub) {
  std::array<uint8_t, 64> sk;
  std::memcpy(sk.data(), seed.data(), 32);
  std::memcpy(sk.data() + 32, pub.data(), 32);
  return sk;
}

int8_t decode_table(char c) {
  if (c >= 'A' && c <= 'Z') return static_cast<int8_t>(c - 'A');
  if (c >= 'a' && c <= 'z') return static_cast<int8_t>(c - 'a' + 26);
  if (c >= '0' && c <= '9') return static_cast<int8_t>(c - '0' + 52);
  if (c == '-') return 62;
  if (c == '_') return 63;
  return -1;
}

}  // namespace

KeyPair KeyPair::generate(std::string kid) {
  ensure_sodium();
  std::array<uint8_t, 32> seed;
  randombytes_buf(seed.data(), seed.size());
  return from_seed(std::move(kid), seed);
}

KeyPair KeyPair::from_seed(std::string kid, std::span<const uint8_t> seed) {
  ensure_sodium();
  if (seed.size() != 32) {
    throw Error(Errc::BadSeedLength,
                "Ed25519 seed must be 32 bytes, got " + std::to_string(seed.size()));
  }
  KeyPair kp;
  kp.kid_ = std::move(kid);
  std::memcpy(kp.seed_.data(), seed.data(), 32);
  std::array<uint8_t, 64> sk;
  crypto_sign_ed25519_seed_keypair(kp.public_.data(), sk.data(), kp.seed_.data());
  sodium_memzero(sk.data(), sk.size());
  return kp;
}

Signature KeyPair::sign(std::span<const uint8_t> message) const {
  ensure_sodium();
  Signature sig;
  auto sk = secret_key_of(seed_, public_);
  crypto_sign_ed25519_detached(sig.bytes.data(), nullptr, message.data(), message.size(),
                               sk.data());
  sodium_memzero(sk.data(), sk.size());
  return sig;
}

Signature KeyPair::sign(std::string_view message) const {
  return sign(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(message.data()),
                                       message.size()));
}

bool verify(const PublicKey& key, std::span<const uint8_t> message, const Signature& sig) noexcept {
  ensure_sodium();
  return crypto_sign_ed25519_verify_detached(sig.bytes.data(), message.data(), message.size(),
                                             key.bytes.data()) == 0;
}

bool verify(const PublicKey& key, std::string_view message, const Signature& sig) noexcept {
  return verify(key,
                std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(message.data()),
                                         message.size()),
                sig);
}

std::string b64url_encode(std::span<const uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() * 4 + 2) / 3);
  size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    uint32_t v = (uint32_t(bytes[i]) << 16) | (uint32_t(bytes[i + 1]) << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 0x3F];
    out += kAlphabet[(v >> 12) & 0x3F];
    out += kAlphabet[(v >> 6) & 0x3F];
    out += kAlphabet[v & 0x3F];
  }
  size_t rem = bytes.size() - i;
  if (rem == 1) {
    uint32_t v = uint32_t(bytes[i]) << 16;
    out += kAlphabet[(v >> 18) & 0x3F];
    out += kAlphabet[(v >> 12) & 0x3F];
  } else if (rem == 2) {
    uint32_t v = (uint32_t(bytes[i]) << 16) | (uint32_t(bytes[i + 1]) << 8);
    out += kAlphabet[(v >> 18) & 0x3F];
    out += kAlphabet[(v >> 12) & 0x3F];
    out += kAlphabet[(v >> 6) & 0x3F];
  }
  return out;
}

std::vector<uint8_t> b64url_decode(std::string_view text) {
  if (text.find('=') != std::string_view::npos) {
    throw Error(Errc::InvalidBase64Url, "padding characters are not allowed");
  }
  if (text.size() % 4 == 1) {
    throw Error(Errc::InvalidBase64Url, "impossible input length " + std::to_string(text.size()));
  }
  std::vector<uint8_t> out;
  out.reserve(text.size() * 3 / 4);
  uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    int8_t v = decode_table(c);
    if (v < 0) throw Error(Errc::InvalidBase64Url, std::string("invalid character '") + c + "'");
    acc = (acc << 6) | static_cast<uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<uint8_t>((acc >> bits) & 0xFF));
    }
  }
  if (bits > 0 && (acc & ((1u << bits) - 1)) != 0) {
    throw Error(Errc::InvalidBase64Url, "non-canonical trailing bits");
  }
  return out;
}

std::string b64url_of_signature(const Signature& sig) { return b64url_encode(sig.bytes); }

std::optional<Signature> signature_from_b64url(std::string_view text) noexcept {
  try {
    auto bytes = b64url_decode(text);
    if (bytes.size() != 64) return std::nullopt;
    Signature sig;
    std::memcpy(sig.bytes.data(), bytes.data(), 64);
    return sig;
  } catch (const Error&) {
    return std::nullopt;
  }
}

json::Value keypair_to_json(const KeyPair& key) {
  json::Object obj;
  obj.emplace("kid", key.kid());
  obj.emplace("alg", kAlgName);
  obj.emplace("seed", b64url_encode(key.seed()));
  obj.emplace("public_key", b64url_encode(key.public_key().bytes));
  return json::Value(std::move(obj));
}

json::Value public_key_to_json(const PublicKey& key) {
  json::Object obj;
  obj.emplace("kid", key.kid);
  obj.emplace("alg", kAlgName);
  obj.emplace("public_key", b64url_encode(key.bytes));
  return json::Value(std::move(obj));
}

namespace {

const json::Value& require_field(const json::Object& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw Error(Errc::MissingField, name);
  return it->second;
}

std::array<uint8_t, 32> key_bytes_32(const std::string& text, const char* what) {
  auto bytes = b64url_decode(text);
  if (bytes.size() != 32) {
    throw Error(Errc::BadKeyLength, std::string(what) + " must decode to 32 bytes, got " +
                                        std::to_string(bytes.size()));
  }
  std::array<uint8_t, 32> out;
  std::memcpy(out.data(), bytes.data(), 32);
  return out;
}

}  // namespace

KeyPair keypair_from_json(const json::Value& doc) {
  const auto& obj = doc.as_object();
  if (require_field(obj, "alg").as_string() != kAlgName) {
    throw Error(Errc::UnsupportedAlg, require_field(obj, "alg").as_string());
  }
  auto seed = key_bytes_32(require_field(obj, "seed").as_string(), "seed");
  return KeyPair::from_seed(require_field(obj, "kid").as_string(), seed);
}

PublicKey public_key_from_json(const json::Value& doc) {
  const auto& obj = doc.as_object();
  if (require_field(obj, "alg").as_string() != kAlgName) {
    throw Error(Errc::UnsupportedAlg, require_field(obj, "alg").as_string());
  }
  PublicKey pk;
  pk.kid = require_field(obj, "kid").as_string();
  pk.bytes = key_bytes_32(require_field(obj, "public_key").as_string(), "public_key");
  return pk;
}

void random_bytes(std::span<uint8_t> out) {
  ensure_sodium();
  randombytes_buf(out.data(), out.size());
}

}  // namespace hdp::crypto
