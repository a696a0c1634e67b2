#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "echosim/runner.hpp"
#include "echosim/scenario.hpp"

namespace echosim {

// Canned scenario families behind the attack/defense grid. Geometry is fixed
// per family; the seed drives nonces and jitter.

ScenarioConfig baseline_attack_scenario(std::uint64_t seed);
ScenarioConfig defense_scenario(AccessMode mode, std::uint64_t seed);
ScenarioConfig oneway_defense_scenario(std::uint64_t seed);

// Symmetric 100 m geometry: verifier at the origin, victim and adversary
// 100 m away on opposite sides. message_bytes controls the frame duration.
ScenarioConfig overwrite_scenario(std::size_t message_bytes, std::uint64_t seed);
ScenarioConfig overwrite_hash_scenario(std::size_t message_bytes, std::uint64_t seed);

// Victim start jitter vs a fixed aim point; forged claim airs for
// (192 + 8*message_bytes)/b0 seconds.
ScenarioConfig injection_scenario(double jitter_window, double aim_offset, std::uint64_t seed);

// Adversary-success predicates per strategy.
bool impersonation_succeeded(const RunResult& r);
bool oneway_forgery_succeeded(const RunResult& r);
bool overwrite_spliced(const RunResult& r);
bool injection_hit(const RunResult& r);

struct MatrixCell {
  std::string protocol;  // grid row: echo+plain, echo+shared-key, ...
  std::string strategy;
  int runs = 0;
  int adversary_successes = 0;
};

// The attack-success grid: protocol/defense rows against the implemented
// strategies, counted over seeded runs.
std::vector<MatrixCell> attack_matrix(int runs_per_cell, bool parallel);

std::string render_matrix(const std::vector<MatrixCell>& cells);

}  // namespace echosim
