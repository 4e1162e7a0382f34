#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "phiq/record.hpp"

namespace phiq {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 2,
  kExitInternal = 3,
  kExitCrossCheck = 4,
};

struct RunConfig {
  std::string subcommand;
  std::uint64_t N = 1;
  std::uint64_t q = 5;
  std::string method = "both";  // closed | snf | both
  std::string op = "Tq";
  std::string ideal;
  std::string format = "json";  // json | csv | text
  std::string output;           // empty: stdout
  std::string cache;            // empty: PHI_CACHE or phiq_cache.jsonl
  bool full_presentation = false;
  std::uint64_t q_min = 5;
  std::uint64_t q_max = 97;
  std::uint64_t n_min = 1;
  std::uint64_t n_max = 100;
  unsigned jobs = 0;  // 0: hardware concurrency
};

struct CommandOutput {
  int exit_code = kExitOk;
  std::vector<Json> records;
  std::string error;
  std::vector<std::string> log;  // skipped pairs, cache statistics
};

Json run_analyze(const RunConfig& cfg);
Json run_group(const RunConfig& cfg);
Json run_hecke(const RunConfig& cfg);
Json run_kernel(const RunConfig& cfg);
Json run_oracle(const RunConfig& cfg);
/// Sweeps every valid (N, q) in the configured ranges through `group --method both`.
CommandOutput run_table(const RunConfig& cfg);

/// Dispatches on cfg.subcommand and maps failures to the exit-code contract.
CommandOutput run_command(const RunConfig& cfg);

std::string render(const Json& record, const std::string& format);

}  // namespace phiq
