#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hdp/canonical_json.hpp"

namespace hdp::corpus {

// Outcome of replaying one golden case.
struct CaseResult {
  std::string name;
  bool passed = false;
  std::vector<std::string> failures;  // one line per mismatch
};

json::Value to_json(const CaseResult& result);

// Writes the golden corpus: deterministic inputs (seeds, clocks, token ids)
// alongside expected canonical token bytes and expected verification
// outcomes for a battery of mutations. Any conforming implementation can
// regenerate the tokens byte-exactly and reproduce every report.
void generate_corpus(const std::filesystem::path& out_dir);

// Replays every <case>.json in the directory: rebuilds tokens from inputs,
// byte-compares them, and checks each mutation's (failed_step, reason).
std::vector<CaseResult> run_corpus(const std::filesystem::path& dir);

}  // namespace hdp::corpus
