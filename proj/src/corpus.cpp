#include "hdp/corpus.hpp"

#include <fstream>

#include "hdp/crypto.hpp"
#include "hdp/lifecycle.hpp"
#include "hdp/transport.hpp"
#include "hdp/verify.hpp"

namespace hdp::corpus {

namespace {

constexpr int64_t kClock = 1767225600000;  // fixed corpus epoch
constexpr int64_t kVerifyNow = kClock + 60000;
constexpr const char* kSession = "sess-gold";

std::string seed_b64(uint8_t fill) {
  std::array<uint8_t, 32> seed;
  seed.fill(fill);
  return crypto::b64url_encode(seed);
}

std::string fixed_uuid(int n) {
  char buf[37];
  std::snprintf(buf, sizeof buf, "%08x-0000-4000-8000-%012x", 0x10000 + n, n);
  return buf;
}

// ---- case construction helpers (generation side) ----

json::Value key_entry(const std::string& kid, uint8_t fill) {
  json::Object obj;
  obj.emplace("kid", kid);
  obj.emplace("seed", seed_b64(fill));
  return json::Value(std::move(obj));
}

json::Value hop_entry(int i, const std::string& summary) {
  json::Object obj;
  obj.emplace("agent_id", "agent-" + std::to_string(i));
  obj.emplace("agent_type", i == 1 ? "orchestrator" : "worker");
  obj.emplace("action_summary", summary);
  obj.emplace("at", json::Value(kClock + i * 1000));
  return json::Value(std::move(obj));
}

json::Value default_principal() {
  Principal p;
  p.id = "principal-7";
  p.id_type = "opaque";
  p.display_name = "Golden Principal";
  return to_json(p);
}

json::Value default_scope(std::optional<int64_t> max_hops = std::nullopt) {
  Scope s;
  s.intent = "produce the weekly operations digest and file it";
  s.data_classification = "internal";
  s.network_egress = true;
  s.persistence = false;
  s.authorized_tools = std::vector<std::string>{"search", "files"};
  s.max_hops = max_hops;
  return to_json(s);
}

struct BuildSpec {
  int key_index = 0;
  int token_index;
  json::Value principal = default_principal();
  json::Value scope = default_scope();
  std::optional<int> parent;  // index of the parent build
  std::string session = kSession;
  int hops = 0;
  int unguarded_hops = 0;

  explicit BuildSpec(int index) : token_index(index) {}

  json::Value to_value() const {
    json::Object obj;
    obj.emplace("key", json::Value(int64_t(key_index)));
    obj.emplace("token_id", fixed_uuid(token_index));
    obj.emplace("clock", json::Value(kClock));
    obj.emplace("session_id", session);
    obj.emplace("principal", principal);
    obj.emplace("scope", scope);
    if (parent) obj.emplace("parent", json::Value(int64_t(*parent)));
    json::Array hop_list;
    for (int i = 1; i <= hops; ++i) {
      hop_list.push_back(hop_entry(i, "golden step " + std::to_string(i)));
    }
    obj.emplace("hops", json::Value(std::move(hop_list)));
    if (unguarded_hops > 0) {
      json::Array forged;
      for (int i = hops + 1; i <= hops + unguarded_hops; ++i) {
        forged.push_back(hop_entry(i, "forged step " + std::to_string(i)));
      }
      obj.emplace("unguarded_hops", json::Value(std::move(forged)));
    }
    return json::Value(std::move(obj));
  }
};

json::Value mutation_set(std::vector<json::Value> path, json::Value value) {
  json::Object obj;
  obj.emplace("op", "set");
  obj.emplace("path", json::Value(json::Array(path.begin(), path.end())));
  obj.emplace("value", std::move(value));
  return json::Value(std::move(obj));
}

json::Value mutation_remove(std::vector<json::Value> path) {
  json::Object obj;
  obj.emplace("op", "remove");
  obj.emplace("path", json::Value(json::Array(path.begin(), path.end())));
  return json::Value(std::move(obj));
}

json::Value mutation_simple(const char* op) {
  json::Object obj;
  obj.emplace("op", op);
  return json::Value(std::move(obj));
}

struct ReportSpec {
  std::string description;
  int target = 0;
  std::optional<json::Value> mutation;
  std::optional<std::string> session_override;
  std::optional<int64_t> now_override;
  std::optional<std::vector<int>> trust_override;  // key indices the verifier holds
  int failed_step = 0;
  std::string reason;
  std::optional<int64_t> failing_hop_seq;

  json::Value to_value() const {
    json::Object obj;
    obj.emplace("description", description);
    obj.emplace("target", json::Value(int64_t(target)));
    if (mutation) obj.emplace("mutation", *mutation);
    json::Object ctx;
    if (session_override) ctx.emplace("session_id", *session_override);
    if (now_override) ctx.emplace("now", json::Value(*now_override));
    if (trust_override) {
      json::Array arr;
      for (int k : *trust_override) arr.push_back(json::Value(int64_t(k)));
      ctx.emplace("trust", json::Value(std::move(arr)));
    }
    if (!ctx.empty()) obj.emplace("context", json::Value(std::move(ctx)));
    obj.emplace("failed_step", json::Value(int64_t(failed_step)));
    obj.emplace("reason", reason);
    if (failing_hop_seq) obj.emplace("failing_hop_seq", json::Value(*failing_hop_seq));
    return json::Value(std::move(obj));
  }
};

struct LineageSpec {
  std::string description;
  std::vector<int> tokens;
  std::optional<std::vector<int>> trust_override;
  std::string expected;  // pass | LinkageBroken | SessionMismatch | TokenInvalid

  json::Value to_value() const {
    json::Object obj;
    obj.emplace("description", description);
    json::Array arr;
    for (int t : tokens) arr.push_back(json::Value(int64_t(t)));
    obj.emplace("tokens", json::Value(std::move(arr)));
    if (trust_override) {
      json::Array trust;
      for (int k : *trust_override) trust.push_back(json::Value(int64_t(k)));
      obj.emplace("trust", json::Value(std::move(trust)));
    }
    obj.emplace("expected", expected);
    return json::Value(std::move(obj));
  }
};

// ---- shared rebuild machinery (both generate and run use this) ----

struct CaseInputs {
  std::vector<crypto::KeyPair> keys;
  std::vector<Token> tokens;
};

crypto::KeyPair key_from_entry(const json::Value& entry) {
  const auto& obj = entry.as_object();
  auto seed = crypto::b64url_decode(obj.find("seed")->second.as_string());
  return crypto::KeyPair::from_seed(obj.find("kid")->second.as_string(), seed);
}

CaseInputs rebuild_tokens(const json::Value& inputs) {
  CaseInputs out;
  const auto& obj = inputs.as_object();
  for (const auto& entry : obj.find("keys")->second.as_array()) {
    out.keys.push_back(key_from_entry(entry));
  }
  auto builds_it = obj.find("builds");
  if (builds_it == obj.end()) return out;
  for (const auto& build : builds_it->second.as_array()) {
    const auto& b = build.as_object();
    const crypto::KeyPair& key =
        out.keys.at(static_cast<size_t>(b.find("key")->second.as_number()));
    IssueRequest req;
    req.principal = principal_from_json(b.find("principal")->second);
    req.scope = scope_from_json(b.find("scope")->second);
    req.session_id = b.find("session_id")->second.as_string();
    req.now = static_cast<int64_t>(b.find("clock")->second.as_number());
    if (auto it = b.find("ttl_ms"); it != b.end()) {
      req.ttl_ms = static_cast<int64_t>(it->second.as_number());
    }
    if (auto it = b.find("parent"); it != b.end()) {
      req.parent_token_id =
          out.tokens.at(static_cast<size_t>(it->second.as_number())).header.token_id;
    }
    Token token = issue(req, key, b.find("token_id")->second.as_string());
    auto run_hops = [&](const json::Value& list, bool guarded) {
      for (const auto& hop : list.as_array()) {
        const auto& h = hop.as_object();
        HopRequest hr;
        hr.agent_id = h.find("agent_id")->second.as_string();
        hr.agent_type = h.find("agent_type")->second.as_string();
        hr.action_summary = h.find("action_summary")->second.as_string();
        if (auto it = h.find("agent_fingerprint"); it != h.end()) {
          hr.agent_fingerprint = it->second.as_string();
        }
        hr.now = static_cast<int64_t>(h.find("at")->second.as_number());
        token = guarded ? extend(token, hr, key, hr.now) : extend_unguarded(token, hr, key);
      }
    };
    run_hops(b.find("hops")->second, /*guarded=*/true);
    if (auto it = b.find("unguarded_hops"); it != b.end()) {
      run_hops(it->second, /*guarded=*/false);
    }
    out.tokens.push_back(std::move(token));
  }
  return out;
}

SessionContext context_for(const CaseInputs& inputs, const json::Value* overrides) {
  SessionContext ctx;
  ctx.current_session_id = kSession;
  ctx.now = kVerifyNow;
  std::optional<std::vector<int>> trust;
  if (overrides) {
    const auto& o = overrides->as_object();
    if (auto it = o.find("session_id"); it != o.end()) {
      ctx.current_session_id = it->second.as_string();
    }
    if (auto it = o.find("now"); it != o.end()) {
      ctx.now = static_cast<int64_t>(it->second.as_number());
    }
    if (auto it = o.find("trust"); it != o.end()) {
      trust = std::vector<int>{};
      for (const auto& v : it->second.as_array()) {
        trust->push_back(static_cast<int>(v.as_number()));
      }
    }
  }
  if (trust) {
    for (int idx : *trust) {
      ctx.add_key(inputs.keys.at(static_cast<size_t>(idx)).public_key());
    }
  } else {
    for (const auto& key : inputs.keys) ctx.add_key(key.public_key());
  }
  return ctx;
}

// Applies a mutation spec to the token's JSON document; returns the bytes to
// feed the verifier.
std::string apply_mutation(const Token& token, const json::Value* mutation) {
  if (mutation == nullptr) return canonical_bytes(token);
  const auto& m = mutation->as_object();
  const std::string op = m.find("op")->second.as_string();
  if (op == "empty") return "";
  if (op == "garbage") return "this is not an hdp token";
  if (op == "truncate") {
    std::string bytes = canonical_bytes(token);
    return bytes.substr(0, bytes.size() / 2);
  }
  json::Value doc = to_json(token);
  const json::Array& path = m.find("path")->second.as_array();
  json::Value* node = &doc;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i].is_string()) {
      node = &node->as_object().find(path[i].as_string())->second;
    } else {
      node = &node->as_array().at(static_cast<size_t>(path[i].as_number()));
    }
  }
  const json::Value& leaf = path.back();
  if (op == "set") {
    const json::Value& value = m.find("value")->second;
    if (leaf.is_string()) {
      node->as_object().insert_or_assign(leaf.as_string(), value);
    } else {
      node->as_array().at(static_cast<size_t>(leaf.as_number())) = value;
    }
  } else if (op == "remove") {
    if (leaf.is_string()) {
      node->as_object().erase(leaf.as_string());
    } else {
      auto& arr = node->as_array();
      arr.erase(arr.begin() + static_cast<std::ptrdiff_t>(leaf.as_number()));
    }
  } else {
    throw Error(Errc::MalformedJson, "unknown mutation op \"" + op + "\"");
  }
  return json::canonicalize(doc);
}

// ---- the golden case set ----

json::Value make_tokens_case(const std::string& name, const std::vector<json::Value>& keys,
                             const std::vector<BuildSpec>& builds,
                             const std::vector<ReportSpec>& reports,
                             const std::vector<LineageSpec>& lineages = {}) {
  json::Object inputs;
  inputs.emplace("keys", json::Value(json::Array(keys.begin(), keys.end())));
  json::Array build_arr;
  for (const auto& b : builds) build_arr.push_back(b.to_value());
  inputs.emplace("builds", json::Value(std::move(build_arr)));
  json::Value inputs_value(std::move(inputs));

  json::Object doc;
  doc.emplace("name", name);
  doc.emplace("kind", "tokens");

  CaseInputs built = rebuild_tokens(inputs_value);
  doc.emplace("inputs", std::move(inputs_value));
  json::Array expected;
  for (const auto& token : built.tokens) expected.push_back(canonical_bytes(token));
  doc.emplace("expected_tokens", json::Value(std::move(expected)));

  json::Array report_arr;
  for (const auto& r : reports) report_arr.push_back(r.to_value());
  doc.emplace("expected_reports", json::Value(std::move(report_arr)));

  if (!lineages.empty()) {
    json::Array lineage_arr;
    for (const auto& l : lineages) lineage_arr.push_back(l.to_value());
    doc.emplace("lineage_reports", json::Value(std::move(lineage_arr)));
  }
  return json::Value(std::move(doc));
}

std::vector<std::pair<std::string, json::Value>> build_cases() {
  std::vector<std::pair<std::string, json::Value>> cases;
  const std::vector<json::Value> one_key = {key_entry("issuer-gold", 0x11),
                                            key_entry("bystander", 0x22)};

  // 0/1/3/10-hop golden tokens with per-size mutation batteries
  {
    BuildSpec b(0);
    std::vector<ReportSpec> reports;
    reports.push_back({"session swap is rejected by step 7", 0, std::nullopt, "sess-other",
                       std::nullopt, std::nullopt, 7, "SessionMismatch", std::nullopt});
    reports.push_back({"clock past expiry is rejected by step 2", 0, std::nullopt, std::nullopt,
                       kClock + kDefaultTtlMs, std::nullopt, 2, "Expired", std::nullopt});
    reports.push_back({"verifier without the issuer kid rejects at step 3", 0, std::nullopt,
                       std::nullopt, std::nullopt, std::vector<int>{1}, 3, "UnknownKid",
                       std::nullopt});
    cases.emplace_back("token_0hop", make_tokens_case("token_0hop", one_key, {b}, reports));
  }
  {
    BuildSpec b(1);
    b.hops = 1;
    std::vector<ReportSpec> reports;
    reports.push_back({"unsupported version fails step 1", 0,
                       mutation_set({json::Value("hdp")}, json::Value("0.9")), std::nullopt,
                       std::nullopt, std::nullopt, 1, "UnsupportedVersion", std::nullopt});
    reports.push_back({"version mirror mismatch fails step 1", 0,
                       mutation_set({json::Value("header"), json::Value("version")},
                                    json::Value("0.2")),
                       std::nullopt, std::nullopt, std::nullopt, 1, "UnsupportedVersion",
                       std::nullopt});
    reports.push_back({"tampered intent fails root signature", 0,
                       mutation_set({json::Value("scope"), json::Value("intent")},
                                    json::Value("read every mailbox")),
                       std::nullopt, std::nullopt, std::nullopt, 3, "RootSignatureInvalid",
                       std::nullopt});
    cases.emplace_back("token_1hop", make_tokens_case("token_1hop", one_key, {b}, reports));
  }
  {
    BuildSpec b(2);
    b.hops = 3;
    std::vector<ReportSpec> reports;
    reports.push_back({"mutated hop action summary fails step 5 at that hop", 0,
                       mutation_set({json::Value("chain"), json::Value(1),
                                     json::Value("action_summary")},
                                    json::Value("launder the audit trail")),
                       std::nullopt, std::nullopt, std::nullopt, 5, "HopSignatureInvalid", 2});
    reports.push_back({"removed interior hop fails step 4", 0,
                       mutation_remove({json::Value("chain"), json::Value(0)}), std::nullopt,
                       std::nullopt, std::nullopt, 4, "ChainSequenceViolation", std::nullopt});
    reports.push_back({"duplicate seq fails step 4", 0,
                       mutation_set({json::Value("chain"), json::Value(2), json::Value("seq")},
                                    json::Value(2)),
                       std::nullopt, std::nullopt, std::nullopt, 4, "ChainSequenceViolation",
                       std::nullopt});
    reports.push_back({"corrupted hop signature fails step 5", 0,
                       mutation_set({json::Value("chain"), json::Value(0),
                                     json::Value("hop_signature")},
                                    json::Value(std::string(86, 'B'))),
                       std::nullopt, std::nullopt, std::nullopt, 5, "HopSignatureInvalid", 1});
    cases.emplace_back("token_3hop", make_tokens_case("token_3hop", one_key, {b}, reports));
  }
  {
    BuildSpec b(3);
    b.hops = 10;
    std::vector<ReportSpec> reports;
    reports.push_back({"stripping the principal leaves an unverifiable document", 0,
                       mutation_remove({json::Value("principal")}), std::nullopt, std::nullopt,
                       std::nullopt, 1, "Malformed", std::nullopt});
    reports.push_back({"truncated bytes are malformed", 0, mutation_simple("truncate"),
                       std::nullopt, std::nullopt, std::nullopt, 1, "Malformed", std::nullopt});
    json::Value doc = make_tokens_case("token_10hop", one_key, {b}, reports);
    // record the measured size for cross-implementation comparison
    const auto& bytes =
        doc.as_object().find("expected_tokens")->second.as_array()[0].as_string();
    doc.as_object().emplace("size_bytes", json::Value(static_cast<int64_t>(bytes.size())));
    cases.emplace_back("token_10hop", std::move(doc));
  }

  // re-authorization lineage, same principal
  {
    BuildSpec t1(4);
    t1.hops = 2;
    BuildSpec t2(5);
    t2.parent = 0;
    t2.scope = default_scope(8);
    BuildSpec stranger(6);       // no parent link
    BuildSpec other_session(7);  // parented, but issued under another session
    other_session.parent = 0;
    other_session.session = "sess-elsewhere";
    std::vector<LineageSpec> lineages;
    lineages.push_back({"re-authorization pair verifies", {0, 1}, std::nullopt, "pass"});
    lineages.push_back({"unlinked successor breaks lineage", {0, 2}, std::nullopt,
                        "LinkageBroken"});
    lineages.push_back({"divergent session breaks lineage", {0, 3}, std::nullopt,
                        "SessionMismatch"});
    cases.emplace_back("reauth_lineage",
                       make_tokens_case("reauth_lineage", one_key,
                                        {t1, t2, stranger, other_session}, {}, lineages));
  }

  // sequential multi-principal authorization, two issuers
  {
    const std::vector<json::Value> two_keys = {key_entry("issuer-a", 0x31),
                                               key_entry("issuer-b", 0x32)};
    BuildSpec t1(8);
    json::Object p1;
    p1.emplace("id", "human-a");
    p1.emplace("id_type", "opaque");
    t1.principal = json::Value(std::move(p1));
    BuildSpec t2(9);
    t2.key_index = 1;
    t2.parent = 0;
    json::Object p2;
    p2.emplace("id", "human-b");
    p2.emplace("id_type", "opaque");
    t2.principal = json::Value(std::move(p2));
    std::vector<LineageSpec> lineages;
    lineages.push_back({"two-principal sequential chain verifies", {0, 1}, std::nullopt, "pass"});
    lineages.push_back({"verifier missing principal B's key rejects the pair", {0, 1},
                        std::vector<int>{0}, "TokenInvalid"});
    cases.emplace_back("multi_principal_pair",
                       make_tokens_case("multi_principal_pair", two_keys, {t1, t2}, {},
                                        lineages));
  }

  // S1: a missing/garbled token is not verifiable at all
  {
    BuildSpec b(10);
    std::vector<ReportSpec> reports;
    reports.push_back({"S1: absent token bytes", 0, mutation_simple("empty"), std::nullopt,
                       std::nullopt, std::nullopt, 1, "Malformed", std::nullopt});
    reports.push_back({"S1: non-token bytes", 0, mutation_simple("garbage"), std::nullopt,
                       std::nullopt, std::nullopt, 1, "Malformed", std::nullopt});
    cases.emplace_back("s1_missing_token",
                       make_tokens_case("s1_missing_token", one_key, {b}, reports));
  }

  // S2: forgery under a non-issuer key, same kid
  {
    const std::vector<json::Value> keys = {key_entry("issuer-gold", 0x11),
                                           key_entry("issuer-gold", 0x66)};
    BuildSpec honest(11);
    BuildSpec forged(12);
    forged.key_index = 1;
    json::Object fp;
    fp.emplace("id", "forged-principal");
    fp.emplace("id_type", "opaque");
    forged.principal = json::Value(std::move(fp));
    std::vector<ReportSpec> reports;
    reports.push_back({"S2: attacker-signed token fails root verification", 1, std::nullopt,
                       std::nullopt, std::nullopt, std::vector<int>{0}, 3,
                       "RootSignatureInvalid", std::nullopt});
    json::Value doc = make_tokens_case("s2_forged_token", keys, {honest, forged}, reports);
    // both keys share a kid here; the baseline verifier must hold the real one
    json::Array trust;
    trust.push_back(json::Value(int64_t(0)));
    doc.as_object().emplace("default_trust", json::Value(std::move(trust)));
    cases.emplace_back("s2_forged_token", std::move(doc));
  }

  // S3 variants live in token_3hop above; S4 replay defenses:
  {
    BuildSpec b(13);
    b.hops = 2;
    std::vector<ReportSpec> reports;
    reports.push_back({"S4: replay into another session fails step 7", 0, std::nullopt,
                       "sess-hijacked", std::nullopt, std::nullopt, 7, "SessionMismatch",
                       std::nullopt});
    reports.push_back({"S4: replay after expiry fails step 2", 0, std::nullopt, std::nullopt,
                       kClock + kDefaultTtlMs + 1, std::nullopt, 2, "Expired", std::nullopt});
    cases.emplace_back("s4_replay", make_tokens_case("s4_replay", one_key, {b}, reports));
  }

  // remaining failure reasons: max_hops budget (forged past the guard)
  {
    BuildSpec b(14);
    b.scope = default_scope(2);
    b.hops = 2;
    b.unguarded_hops = 1;
    std::vector<ReportSpec> reports;
    reports.push_back({"validly signed chain over max_hops fails step 6", 0, std::nullopt,
                       std::nullopt, std::nullopt, std::nullopt, 6, "MaxHopsExceeded",
                       std::nullopt});
    json::Value doc = make_tokens_case("max_hops_budget", one_key, {b}, reports);
    doc.as_object().emplace("token_0_expected_invalid", true);
    cases.emplace_back("max_hops_budget", std::move(doc));
  }

  // RFC 8032 vectors
  {
    struct V {
      const char* seed;
      const char* pk;
      const char* msg;
      const char* sig;
    };
    static const V vs[] = {
        {"9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60",
         "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a", "",
         "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e06522490155"
         "5fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b"},
        {"4ccd089b28ff96da9db6c346ec114e0f5b8a319f35aba624da8cf6ed4fb8a6fb",
         "3d4017c3e843895a92b70aa74d1b7ebc9c982ccf2ec4968cc0cd55f12af4660c", "72",
         "92a009a9f0d4cab8720e820b5f642540a2b27b5416503f8fb3762223ebdb69da"
         "085ac1e43e15996e458f3613d0f11d8c387b2eaeb4302aeeb00d291612bb0c00"},
        {"c5aa8df43f9f837bedb7442f31dcb7b166d38535076f094b85ce3a2e0b4458f7",
         "fc51cd8e6218a1a38da47ed00230f0580816ed13ba3303ac5deb911548908025", "af82",
         "6291d657deec24024827e69c3abe01a30ce548a284743a445e3680d7db5ac3ac"
         "18ff9b538d16f290ae67f760984dc6594a7c15e9716ed28dc027beceea1ec40a"},
        {"833fe62409237b9d62ec77587520911e9a759cec1d19755b7da901b96dca3d42",
         "ec172b93ad5e563bf4932c70e1245034c35467ef2efd4d64ebf819683467e2bf",
         "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a"
         "2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f",
         "dc2a4459e7369633a52b1bf277839a00201009a3efbf3ecb69bea2186c26b589"
         "09351fc9ac90b3ecfdfbc7c66431e0303dca179c138ac17ad9bef1177331a704"},
    };
    json::Array vectors;
    for (const auto& v : vs) {
      json::Object obj;
      obj.emplace("seed_hex", v.seed);
      obj.emplace("public_key_hex", v.pk);
      obj.emplace("message_hex", v.msg);
      obj.emplace("signature_hex", v.sig);
      vectors.push_back(json::Value(std::move(obj)));
    }
    json::Object inputs;
    inputs.emplace("vectors", json::Value(std::move(vectors)));
    json::Object doc;
    doc.emplace("name", "rfc8032_vectors");
    doc.emplace("kind", "rfc8032");
    doc.emplace("inputs", json::Value(std::move(inputs)));
    cases.emplace_back("rfc8032_vectors", json::Value(std::move(doc)));
  }

  // well-known key document
  {
    json::Object inputs;
    json::Array keys;
    keys.push_back(key_entry("issuer-gold", 0x11));
    keys.push_back(key_entry("issuer-rotated", 0x12));
    inputs.emplace("keys", json::Value(std::move(keys)));
    json::Object doc;
    doc.emplace("name", "wellknown_document");
    doc.emplace("kind", "wellknown");
    CaseInputs built = rebuild_tokens(json::Value(inputs));
    std::vector<crypto::PublicKey> pks;
    for (const auto& k : built.keys) pks.push_back(k.public_key());
    doc.emplace("inputs", json::Value(std::move(inputs)));
    doc.emplace("expected_document",
                json::canonicalize(transport::render_wellknown(pks)));
    cases.emplace_back("wellknown_document", json::Value(std::move(doc)));
  }

  return cases;
}

// ---- replay side ----

std::vector<uint8_t> hex_to_bytes(const std::string& hex) {
  auto nibble = [](char c) -> uint8_t {
    if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
    return static_cast<uint8_t>(c - 'A' + 10);
  };
  std::vector<uint8_t> out;
  for (size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<uint8_t>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  }
  return out;
}

std::string bytes_to_hex(std::span<const uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (uint8_t b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 0xF];
  }
  return out;
}

void run_tokens_case(const json::Object& doc, CaseResult& result) {
  CaseInputs built = rebuild_tokens(doc.find("inputs")->second);
  const json::Array& expected = doc.find("expected_tokens")->second.as_array();
  if (expected.size() != built.tokens.size()) {
    result.failures.push_back("expected " + std::to_string(expected.size()) +
                              " tokens, rebuilt " + std::to_string(built.tokens.size()));
    return;
  }
  for (size_t i = 0; i < expected.size(); ++i) {
    if (canonical_bytes(built.tokens[i]) != expected[i].as_string()) {
      result.failures.push_back("token " + std::to_string(i) +
                                " does not match its golden bytes");
    }
  }

  // the primary token must verify clean unless the case says otherwise
  bool token0_invalid = false;
  if (auto it = doc.find("token_0_expected_invalid"); it != doc.end()) {
    token0_invalid = it->second.as_bool();
  }
  if (!built.tokens.empty() && !token0_invalid) {
    json::Object base_ctx;
    if (auto it = doc.find("default_trust"); it != doc.end()) {
      base_ctx.emplace("trust", it->second);
    }
    json::Value base_ctx_value(std::move(base_ctx));
    SessionContext ctx = context_for(built, &base_ctx_value);
    auto report = verify_token_bytes(expected[0].as_string(), ctx);
    if (!report.passed) {
      result.failures.push_back("golden token 0 failed verification: " + report.summary());
    }
  }

  if (auto reports_it = doc.find("expected_reports"); reports_it != doc.end()) {
    for (const auto& entry : reports_it->second.as_array()) {
      const auto& r = entry.as_object();
      const std::string description = r.find("description")->second.as_string();
      size_t target = static_cast<size_t>(r.find("target")->second.as_number());
      const json::Value* mutation = nullptr;
      if (auto it = r.find("mutation"); it != r.end()) mutation = &it->second;
      const json::Value* context = nullptr;
      if (auto it = r.find("context"); it != r.end()) context = &it->second;
      std::string bytes = apply_mutation(built.tokens.at(target), mutation);
      SessionContext ctx = context_for(built, context);
      VerificationReport report = verify_token_bytes(bytes, ctx);
      int want_step = static_cast<int>(r.find("failed_step")->second.as_number());
      std::string want_reason = r.find("reason")->second.as_string();
      if (report.passed || report.failed_step != want_step ||
          failure_reason_name(*report.reason) != want_reason) {
        result.failures.push_back(description + ": expected step " +
                                  std::to_string(want_step) + " " + want_reason + ", got " +
                                  report.summary());
      } else if (auto it = r.find("failing_hop_seq"); it != r.end()) {
        auto want_seq = static_cast<int64_t>(it->second.as_number());
        if (report.failing_hop_seq != want_seq) {
          result.failures.push_back(description + ": expected failing hop " +
                                    std::to_string(want_seq));
        }
      }
    }
  }

  if (auto lineage_it = doc.find("lineage_reports"); lineage_it != doc.end()) {
    for (const auto& entry : lineage_it->second.as_array()) {
      const auto& l = entry.as_object();
      const std::string description = l.find("description")->second.as_string();
      std::vector<Token> tokens;
      for (const auto& idx : l.find("tokens")->second.as_array()) {
        tokens.push_back(built.tokens.at(static_cast<size_t>(idx.as_number())));
      }
      json::Value ctx_override = [&]() -> json::Value {
        json::Object o;
        if (auto it = l.find("trust"); it != l.end()) o.emplace("trust", it->second);
        return json::Value(std::move(o));
      }();
      SessionContext ctx = context_for(built, &ctx_override);
      LineageReport report = verify_lineage(tokens, ctx);
      const std::string expected_outcome = l.find("expected")->second.as_string();
      std::string actual =
          report.passed ? "pass" : lineage_failure_name(report.failure.value());
      if (actual != expected_outcome) {
        result.failures.push_back(description + ": expected " + expected_outcome + ", got " +
                                  actual + " (" + report.detail + ")");
      }
    }
  }
}

void run_rfc8032_case(const json::Object& doc, CaseResult& result) {
  const auto& inputs = doc.find("inputs")->second.as_object();
  for (const auto& entry : inputs.find("vectors")->second.as_array()) {
    const auto& v = entry.as_object();
    auto seed = hex_to_bytes(v.find("seed_hex")->second.as_string());
    auto msg = hex_to_bytes(v.find("message_hex")->second.as_string());
    auto kp = crypto::KeyPair::from_seed("vector", seed);
    if (bytes_to_hex(kp.public_key().bytes) != v.find("public_key_hex")->second.as_string()) {
      result.failures.push_back("public key mismatch for seed " +
                                v.find("seed_hex")->second.as_string());
      continue;
    }
    auto sig = kp.sign(msg);
    if (bytes_to_hex(sig.bytes) != v.find("signature_hex")->second.as_string()) {
      result.failures.push_back("signature mismatch for seed " +
                                v.find("seed_hex")->second.as_string());
    }
    if (!crypto::verify(kp.public_key(), msg, sig)) {
      result.failures.push_back("verification failed for seed " +
                                v.find("seed_hex")->second.as_string());
    }
  }
}

void run_wellknown_case(const json::Object& doc, CaseResult& result) {
  CaseInputs built = rebuild_tokens(doc.find("inputs")->second);
  std::vector<crypto::PublicKey> pks;
  for (const auto& k : built.keys) pks.push_back(k.public_key());
  std::string rendered = json::canonicalize(transport::render_wellknown(pks));
  const std::string& expected = doc.find("expected_document")->second.as_string();
  if (rendered != expected) {
    result.failures.push_back("rendered well-known document does not match golden bytes");
  }
  auto parsed = transport::parse_wellknown(json::parse(expected));
  if (parsed.size() != pks.size()) {
    result.failures.push_back("parsed key count mismatch");
  } else {
    for (size_t i = 0; i < pks.size(); ++i) {
      if (!(parsed[i] == pks[i])) result.failures.push_back("parsed key mismatch");
    }
  }
}

}  // namespace

json::Value to_json(const CaseResult& result) {
  json::Object obj;
  obj.emplace("name", result.name);
  obj.emplace("passed", result.passed);
  json::Array failures;
  for (const auto& f : result.failures) failures.push_back(f);
  obj.emplace("failures", json::Value(std::move(failures)));
  return json::Value(std::move(obj));
}

void generate_corpus(const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + out_dir.string());
  for (const auto& [name, doc] : build_cases()) {
    std::ofstream out(out_dir / (name + ".json"), std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write case " + name);
    std::string bytes = json::dump_pretty(doc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out << '\n';
  }
}

std::vector<CaseResult> run_corpus(const std::filesystem::path& dir) {
  std::vector<CaseResult> results;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    CaseResult result;
    result.name = path.stem().string();
    try {
      std::ifstream in(path, std::ios::binary);
      std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      const json::Value doc = json::parse(bytes);
      const json::Object& obj = doc.as_object();
      result.name = obj.find("name")->second.as_string();
      const std::string kind = obj.find("kind")->second.as_string();
      if (kind == "tokens") {
        run_tokens_case(obj, result);
      } else if (kind == "rfc8032") {
        run_rfc8032_case(obj, result);
      } else if (kind == "wellknown") {
        run_wellknown_case(obj, result);
      } else {
        result.failures.push_back("unknown case kind \"" + kind + "\"");
      }
    } catch (const std::exception& e) {
      result.failures.push_back(std::string("exception: ") + e.what());
    }
    result.passed = result.failures.empty();
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace hdp::corpus
