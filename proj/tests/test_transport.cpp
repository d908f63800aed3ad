#include <doctest.h>

#include <filesystem>
#include <random>
#include <thread>

#include "hdp/lifecycle.hpp"
#include "hdp/transport.hpp"
#include "token_fixtures.hpp"

using namespace hdp;
using namespace hdp::transport;
using testutil::fixed_key;

namespace {

constexpr int64_t kNow = 1760000000000;

Token sample_token(const crypto::KeyPair& key, int hops = 2) {
  IssueRequest req;
  req.principal.id = "carol";
  req.principal.id_type = "opaque";
  req.scope.intent = "archive meeting notes";
  req.scope.data_classification = "public";
  req.session_id = "sess-t";
  req.now = kNow;
  Token t = issue(req, key);
  for (int i = 1; i <= hops; ++i) {
    HopRequest hr{"agent-" + std::to_string(i), "worker", std::nullopt, "hop", kNow + i};
    t = extend(t, hr, key, kNow + i);
  }
  return t;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("hdp-store-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("header value codec round-trips and stays header-safe") {
  auto key = fixed_key("kt");
  Token t = sample_token(key);
  std::string value = encode_header_value(t);
  for (char c : value) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '-' || c == '_';
    CHECK(ok);
  }
  Token back = decode_header_value(value);
  CHECK(back == t);
  CHECK(canonical_bytes(back) == canonical_bytes(t));

  CHECK_THROWS_AS(decode_header_value(value + "="), Error);
  CHECK_THROWS_AS(decode_header_value("!!!"), Error);
  // valid base64url of something that is not a token
  CHECK_THROWS_AS(decode_header_value(crypto::b64url_encode(std::array<uint8_t, 4>{1, 2, 3, 4})),
                  Error);
}

TEST_CASE("token ref store: put/get semantics") {
  auto key = fixed_key("kt");
  TokenRefStore store;
  Token t = sample_token(key);

  std::string id = store.put(t);
  CHECK(id == t.header.token_id);
  auto got = store.get(id);
  REQUIRE(got.has_value());
  CHECK(*got == t);
  CHECK(canonical_bytes(*got) == canonical_bytes(t));

  CHECK(store.put(t) == id);  // idempotent
  CHECK(store.size() == 1);

  CHECK_FALSE(store.get("0e7f11a1-43f3-4f3c-9a2e-dc0f78a2a000").has_value());

  // forged duplicate id with different content
  Token other = sample_token(key, 1);
  other.header.token_id = t.header.token_id;
  CHECK_THROWS_AS(store.put(other), Error);
  try {
    store.put(other);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicateTokenIdConflict);
  }

  Token invalid = t;
  invalid.header.token_id = "bad";
  CHECK_THROWS_AS(store.put(invalid), Error);
}

TEST_CASE("token ref store: file persistence round-trip") {
  auto key = fixed_key("kt");
  TempDir dir;
  Token t1 = sample_token(key, 0);
  Token t2 = sample_token(key, 3);
  {
    TokenRefStore store(dir.path);
    store.put(t1);
    store.put(t2);
  }
  CHECK(std::filesystem::exists(dir.path / (t1.header.token_id + ".json")));

  TokenRefStore reloaded(dir.path);
  CHECK(reloaded.size() == 2);
  auto got = reloaded.get(t2.header.token_id);
  REQUIRE(got.has_value());
  CHECK(canonical_bytes(*got) == canonical_bytes(t2));
}

TEST_CASE("token ref store: concurrent puts and gets") {
  auto key = fixed_key("kt");
  TokenRefStore store;
  std::vector<Token> tokens;
  for (int i = 0; i < 16; ++i) {
    IssueRequest req;
    req.principal.id = "p" + std::to_string(i);
    req.scope.intent = "i" + std::to_string(i);
    req.session_id = "s";
    req.now = kNow;
    tokens.push_back(issue(req, key));
  }
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (int i = 0; i < 16; ++i) {
        store.put(tokens[static_cast<size_t>((i + w) % 16)]);
        store.get(tokens[static_cast<size_t>(i)].header.token_id);
      }
    });
  }
  for (auto& th : workers) th.join();
  CHECK(store.size() == 16);
}

TEST_CASE("well-known key document") {
  auto k1 = fixed_key("k1", 0x01);
  auto k2 = fixed_key("k2", 0x02);
  json::Value doc = render_wellknown({k1.public_key(), k2.public_key()});
  std::string bytes = json::canonicalize(doc);
  CHECK(bytes.rfind("{\"keys\":[", 0) == 0);
  CHECK(bytes.find("\"alg\":\"Ed25519\"") != std::string::npos);

  auto keys = parse_wellknown(json::parse(bytes));
  REQUIRE(keys.size() == 2);
  CHECK(keys[0] == k1.public_key());
  CHECK(keys[1] == k2.public_key());

  // single-key document has the expected shape: 43-char base64url key
  json::Value one = render_wellknown({k1.public_key()});
  const auto& entry = one.as_object().find("keys")->second.as_array()[0].as_object();
  CHECK(entry.find("kid")->second.as_string() == "k1");
  CHECK(entry.find("public_key")->second.as_string().size() == 43);

  CHECK_THROWS_AS(render_wellknown({k1.public_key(), k1.public_key()}), Error);

  json::Value dup = json::parse(
      R"({"keys":[{"kid":"a","alg":"Ed25519","public_key":")" +
      crypto::b64url_encode(k1.public_key().bytes) +
      R"("},{"kid":"a","alg":"Ed25519","public_key":")" +
      crypto::b64url_encode(k2.public_key().bytes) + R"("}]})");
  CHECK_THROWS_AS(parse_wellknown(dup), Error);

  json::Value bad_alg = json::parse(
      R"({"keys":[{"kid":"a","alg":"RS256","public_key":")" +
      crypto::b64url_encode(k1.public_key().bytes) + R"("}]})");
  try {
    parse_wellknown(bad_alg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnsupportedAlg);
  }

  json::Value bad_len =
      json::parse(R"({"keys":[{"kid":"a","alg":"Ed25519","public_key":"AAAA"}]})");
  try {
    parse_wellknown(bad_len);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadKeyLength);
  }
}
