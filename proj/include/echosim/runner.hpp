#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "echosim/access.hpp"
#include "echosim/nodes.hpp"
#include "echosim/scenario.hpp"
#include "echosim/trace.hpp"

namespace echosim {

// Outcome counters over one run's verdicts.
struct Metrics {
  int accepts = 0;
  int rejects_nonce = 0;
  int rejects_too_slow = 0;
  int rejects_timeout = 0;
  int aborts = 0;
  int processed = 0;
  int dropped = 0;
  int rejected_hash = 0;
  int expired_windows = 0;
  int grants_prover = 0;
  int grants_adversary = 0;
  int denies = 0;
  int claims_ignored = 0;
  int overwrite_missed = 0;

  int rejects() const { return rejects_nonce + rejects_too_slow + rejects_timeout; }
};

struct RunResult {
  ScenarioConfig config;  // effective config, seed included
  Trace trace;
  std::vector<VerdictEntry> verdicts;
  Metrics metrics;

  bool adversary_granted() const;
  // Messages the application layer saw for this identity, in verdict order.
  std::vector<std::vector<std::uint8_t>> processed_for(const std::string& identity) const;
};

// Evaluates the three impersonation preconditions over a scenario: identity
// broadcast in clear during verification, wire transform computable without a
// key handle, post-verification requests accepted at any time.
ImpersonationConditions impersonation_conditions(const ScenarioConfig& cfg);

// Wires the configured nodes onto a fresh kernel and drains it.
// Same (scenario, seed) in, byte-identical trace out.
RunResult run_scenario(const ScenarioConfig& cfg);

// Header line carrying the scenario echo, then one record per line.
void write_trace(std::ostream& out, const ScenarioConfig& cfg, const Trace& trace);
std::string trace_to_string(const ScenarioConfig& cfg, const Trace& trace);

struct SweepEntry {
  std::uint64_t seed = 0;
  Metrics metrics;
  std::vector<std::string> verdicts;  // compact per-verdict rendering
};

// Independent runs over seeds base..base+count-1. The parallel path fans the
// runs out over OpenMP threads; results are identical to the serial path
// because runs share no mutable state.
std::vector<SweepEntry> run_sweep(const ScenarioConfig& cfg, std::uint64_t base_seed,
                                  std::size_t count, bool parallel);

std::string render_verdict(const VerdictEntry& e);

}  // namespace echosim
