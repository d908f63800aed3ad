#include <doctest.h>

#include <random>

#include "hdp/crypto.hpp"
#include "test_util.hpp"

using namespace hdp::crypto;
using hdp::Errc;
using hdp::Error;
using testutil::from_hex;
using testutil::to_hex;

namespace {

struct Rfc8032Vector {
  const char* name;
  const char* seed;
  const char* public_key;
  const char* message;
  const char* signature;
};

// RFC 8032 section 7.1 Ed25519 vectors (cross-checked against OpenSSL).
const Rfc8032Vector kVectors[] = {
    {"TEST 1",
     "9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60",
     "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a",
     "",
     "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e06522490155"
     "5fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b"},
    {"TEST 2",
     "4ccd089b28ff96da9db6c346ec114e0f5b8a319f35aba624da8cf6ed4fb8a6fb",
     "3d4017c3e843895a92b70aa74d1b7ebc9c982ccf2ec4968cc0cd55f12af4660c",
     "72",
     "92a009a9f0d4cab8720e820b5f642540a2b27b5416503f8fb3762223ebdb69da"
     "085ac1e43e15996e458f3613d0f11d8c387b2eaeb4302aeeb00d291612bb0c00"},
    {"TEST 3",
     "c5aa8df43f9f837bedb7442f31dcb7b166d38535076f094b85ce3a2e0b4458f7",
     "fc51cd8e6218a1a38da47ed00230f0580816ed13ba3303ac5deb911548908025",
     "af82",
     "6291d657deec24024827e69c3abe01a30ce548a284743a445e3680d7db5ac3ac"
     "18ff9b538d16f290ae67f760984dc6594a7c15e9716ed28dc027beceea1ec40a"},
    {"TEST SHA(abc)",
     "833fe62409237b9d62ec77587520911e9a759cec1d19755b7da901b96dca3d42",
     "ec172b93ad5e563bf4932c70e1245034c35467ef2efd4d64ebf819683467e2bf",
     "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a"
     "2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f",
     "dc2a4459e7369633a52b1bf277839a00201009a3efbf3ecb69bea2186c26b589"
     "09351fc9ac90b3ecfdfbc7c66431e0303dca179c138ac17ad9bef1177331a704"},
};

// Long-message companion to the suite above: the TEST 1024 seed signing a
// deterministic 1023-byte message, expected values frozen from OpenSSL.
std::vector<uint8_t> long_message() {
  std::vector<uint8_t> msg(1023);
  for (size_t i = 0; i < msg.size(); ++i) {
    msg[i] = static_cast<uint8_t>((i * 251 + (i >> 3)) % 256);
  }
  return msg;
}

constexpr const char* kLongSeed = "f5e5767cf153319517630f226876b86c8160cc583bc013744c6bf255f5cc0ee5";
constexpr const char* kLongPub = "278117fc144c72340f67d0f2316e8386ceffbf2b2428c9c51fef7c597f1d426e";
constexpr const char* kLongSig =
    "78dd9ec20dd892deb7daad3db348a50df2c56357e7826da1a85bb919b7c354b9"
    "05f25e28cbc9d76eae4a02af4cfad6281326160b49f1cf9b4c622cf4e7c4a408";

}  // namespace

TEST_CASE("RFC 8032 test vectors: keygen, sign, verify") {
  for (const auto& v : kVectors) {
    CAPTURE(v.name);
    auto kp = KeyPair::from_seed("t", from_hex(v.seed));
    CHECK(to_hex({reinterpret_cast<const char*>(kp.public_key().bytes.data()), 32}) ==
          v.public_key);
    auto msg = from_hex(v.message);
    auto sig = kp.sign(msg);
    CHECK(to_hex({reinterpret_cast<const char*>(sig.bytes.data()), 64}) == v.signature);
    CHECK(verify(kp.public_key(), msg, sig));
  }
}

TEST_CASE("long-message signing matches the OpenSSL-derived vector") {
  auto kp = KeyPair::from_seed("t", from_hex(kLongSeed));
  CHECK(to_hex({reinterpret_cast<const char*>(kp.public_key().bytes.data()), 32}) == kLongPub);
  auto msg = long_message();
  auto sig = kp.sign(msg);
  CHECK(to_hex({reinterpret_cast<const char*>(sig.bytes.data()), 64}) == kLongSig);
  CHECK(verify(kp.public_key(), msg, sig));
}

TEST_CASE("signing is deterministic and message-sensitive") {
  auto kp = KeyPair::generate("k1");
  std::string m1 = "delegate: fetch calendar";
  std::string m2 = "delegate: fetch calendar.";
  CHECK(kp.sign(m1).bytes == kp.sign(m1).bytes);
  CHECK(kp.sign(m1).bytes != kp.sign(m2).bytes);
}

TEST_CASE("unseeded keypairs are distinct") {
  auto a = KeyPair::generate("a");
  auto b = KeyPair::generate("b");
  CHECK(a.public_key().bytes != b.public_key().bytes);
}

TEST_CASE("seed length is enforced") {
  std::vector<uint8_t> short_seed(31, 7);
  CHECK_THROWS_AS(KeyPair::from_seed("x", short_seed), Error);
  try {
    KeyPair::from_seed("x", short_seed);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadSeedLength);
  }
}

TEST_CASE("bit flips in signature or message are rejected") {
  auto kp = KeyPair::generate("k");
  std::vector<uint8_t> msg{1, 2, 3, 4, 5};
  auto sig = kp.sign(msg);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 64; ++i) {
    Signature bad = sig;
    bad.bytes[static_cast<size_t>(i)] ^= static_cast<uint8_t>(1u << (rng() % 8));
    CHECK_FALSE(verify(kp.public_key(), msg, bad));
  }
  for (size_t i = 0; i < msg.size(); ++i) {
    auto bad = msg;
    bad[i] ^= 1;
    CHECK_FALSE(verify(kp.public_key(), bad, sig));
  }
}

TEST_CASE("base64url encodes the spec examples") {
  CHECK(b64url_encode({}) == "");
  std::vector<uint8_t> zeros(32, 0);
  CHECK(b64url_encode(zeros) == std::string(43, 'A'));
  std::vector<uint8_t> fbff{0xfb, 0xff};
  CHECK(b64url_encode(fbff) == "-_8");
  CHECK_THROWS_AS(b64url_decode("AA=="), Error);
  try {
    b64url_decode("AA==");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidBase64Url);
  }
  CHECK_THROWS_AS(b64url_decode("A"), Error);       // impossible length
  CHECK_THROWS_AS(b64url_decode("ab+c"), Error);    // '+' is base64, not base64url
  CHECK_THROWS_AS(b64url_decode("ab/c"), Error);
  CHECK_THROWS_AS(b64url_decode("a b"), Error);
  CHECK_THROWS_AS(b64url_decode("-_9"), Error);     // non-canonical trailing bits
  CHECK(b64url_decode("-_8") == fbff);
}

TEST_CASE("base64url round-trips arbitrary bytes") {
  std::mt19937_64 rng(4648);
  for (int i = 0; i < 2000; ++i) {
    std::vector<uint8_t> bytes(rng() % 67);
    for (auto& b : bytes) b = static_cast<uint8_t>(rng());
    std::string enc = b64url_encode(bytes);
    CHECK(enc.find('=') == std::string::npos);
    for (char c : enc) {
      bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                c == '-' || c == '_';
      CHECK(ok);
    }
    CHECK(b64url_decode(enc) == bytes);
  }
}

TEST_CASE("key files round-trip; public file omits the seed") {
  auto kp = KeyPair::generate("issuer-2026");
  auto doc = keypair_to_json(kp);
  auto kp2 = keypair_from_json(doc);
  CHECK(kp2.kid() == kp.kid());
  CHECK(kp2.seed() == kp.seed());
  CHECK(kp2.public_key().bytes == kp.public_key().bytes);

  auto pub_doc = public_key_to_json(kp.public_key());
  CHECK(pub_doc.as_object().find("seed") == pub_doc.as_object().end());
  auto pk = public_key_from_json(pub_doc);
  CHECK(pk == kp.public_key());

  auto bad = pub_doc;
  bad.as_object().find("alg")->second = hdp::json::Value("RS256");
  CHECK_THROWS_AS(public_key_from_json(bad), Error);
}
