#pragma once

#include <random>
#include <string>

#include "hdp/crypto.hpp"
#include "hdp/token.hpp"
#include "test_util.hpp"

namespace testutil {

inline std::string fake_signature_b64() {
  std::array<uint8_t, 64> zero{};
  return hdp::crypto::b64url_encode(zero);
}

// Structurally valid token with n placeholder-signed hops. Not
// cryptographically valid; lifecycle tests build real ones.
inline hdp::Token make_token(int hops = 0) {
  hdp::Token t;
  t.header.token_id = "7b9915a6-5e30-4a9d-9f78-3f9c62f0a1de";
  t.header.issued_at = 1700000000000;
  t.header.expires_at = 1700086400000;
  t.header.session_id = "sess-412";
  t.principal.id = "user-81";
  t.principal.id_type = "opaque";
  t.scope.intent = "summarize quarterly sales data";
  t.scope.data_classification = "internal";
  t.signature.kid = "k1";
  t.signature.value = fake_signature_b64();
  for (int i = 1; i <= hops; ++i) {
    hdp::Hop hop;
    hop.seq = i;
    hop.parent = i - 1;
    hop.agent_id = "agent-" + std::to_string(i);
    hop.agent_type = i == 1 ? "orchestrator" : "worker";
    hop.timestamp = t.header.issued_at + i * 1000;
    hop.action_summary = "step " + std::to_string(i);
    hop.hop_signature = fake_signature_b64();
    t.chain.push_back(hop);
  }
  return t;
}

// Random structurally valid token exercising optional fields and unicode.
inline hdp::Token random_token(std::mt19937_64& rng) {
  static const char* id_types[] = {"opaque", "email", "uuid", "did", "poh"};
  static const char* classes[] = {"public", "internal", "confidential", "restricted"};
  hdp::Token t = make_token(static_cast<int>(rng() % 6));
  t.header.session_id = "sess-" + std::to_string(rng() % 100000);
  t.header.issued_at = static_cast<int64_t>(rng() % 9007199254730000ull);
  t.header.expires_at = t.header.issued_at + 1 + static_cast<int64_t>(rng() % 10000000);
  if (rng() % 2) t.header.parent_token_id = "3c6fdd31-62d4-4ac7-9455-9cd77efc4ed1";
  t.principal.id = "p-" + std::to_string(rng());
  t.principal.id_type = id_types[rng() % 5];
  if (rng() % 2) t.principal.display_name = random_string(rng, 16);
  if (rng() % 4 == 0) t.principal.poh_credential = "poh-" + std::to_string(rng() % 1000);
  t.scope.intent = "intent " + random_string(rng, 40);
  t.scope.data_classification = classes[rng() % 4];
  t.scope.network_egress = rng() % 2 == 0;
  t.scope.persistence = rng() % 2 == 0;
  if (rng() % 2) {
    t.scope.authorized_tools = std::vector<std::string>{};
    size_t n = rng() % 4;
    for (size_t i = 0; i < n; ++i) t.scope.authorized_tools->push_back("tool" + std::to_string(i));
  }
  if (rng() % 3 == 0) {
    t.scope.authorized_resources = std::vector<std::string>{"res://" + std::to_string(rng() % 50)};
  }
  if (rng() % 2) {
    t.scope.max_hops = static_cast<int64_t>(t.chain.size() + rng() % 8 + 1);
  }
  for (auto& hop : t.chain) {
    hop.timestamp = t.header.issued_at + hop.seq;
    if (rng() % 3 == 0) hop.agent_fingerprint = "sha256:" + std::to_string(rng());
    hop.action_summary = "did " + random_string(rng, 24);
  }
  return t;
}

inline hdp::crypto::KeyPair fixed_key(const std::string& kid, uint8_t fill = 0x42) {
  std::array<uint8_t, 32> seed;
  seed.fill(fill);
  return hdp::crypto::KeyPair::from_seed(kid, seed);
}

}  // namespace testutil
