#include "echosim/experiments.hpp"

#include <sstream>

namespace echosim {

namespace {

std::string tile(const std::string& pattern, std::size_t n) {
  std::string s;
  s.reserve(n);
  while (s.size() < n) s += pattern;
  s.resize(n);
  return s;
}

ScenarioConfig grid_base(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.nonce_bits = 64;
  cfg.horizon = 20.0;
  cfg.verifiers.push_back(VerifierConfig{Point{0, 0}, 150.0, cfg.media});

  ProverSpec p;
  p.identity = "A";
  p.actual_position = Point{60, 0};
  p.claimed_location = p.actual_position;
  p.delta_p = min_processing_delay(static_cast<double>(cfg.nonce_bits), cfg.media);
  p.message = "open";
  cfg.provers.push_back(p);
  return cfg;
}

AdversarySpec grid_adversary() {
  AdversarySpec a;
  a.position = Point{-250, 0};
  a.power = 1.0;
  a.reaction_time = 0.001;
  a.strategy = AdversaryStrategy::EavesdropImpersonate;
  a.forged_message = "unlock-the-door";
  a.target_identity = "A";
  return a;
}

}  // namespace

ScenarioConfig baseline_attack_scenario(std::uint64_t seed) {
  ScenarioConfig cfg = grid_base(seed);
  cfg.variant = Variant::Echo;
  cfg.mode = AccessMode::Plain;
  cfg.adversary = grid_adversary();
  return cfg;
}

ScenarioConfig defense_scenario(AccessMode mode, std::uint64_t seed) {
  ScenarioConfig cfg = baseline_attack_scenario(seed);
  cfg.mode = mode;
  return cfg;
}

ScenarioConfig oneway_defense_scenario(std::uint64_t seed) {
  ScenarioConfig cfg = grid_base(seed);
  cfg.variant = Variant::OneWay;
  cfg.mode = AccessMode::Plain;
  cfg.provers[0].message = "lights-on";
  cfg.adversary = grid_adversary();
  cfg.adversary->forged_message = "lights-off";
  return cfg;
}

ScenarioConfig overwrite_scenario(std::size_t message_bytes, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.variant = Variant::OneWay;
  cfg.horizon = 20.0;
  cfg.verifiers.push_back(VerifierConfig{Point{0, 0}, 150.0, cfg.media});

  ProverSpec p;
  p.identity = "A";
  p.actual_position = Point{100, 0};
  p.claimed_location = p.actual_position;
  p.delta_p = min_processing_delay(static_cast<double>(cfg.nonce_bits), cfg.media);
  p.message = tile("KEEP THE LIGHTS ON ", message_bytes);
  cfg.provers.push_back(p);

  AdversarySpec a;
  a.position = Point{-100, 0};
  a.power = 10.0;
  a.reaction_time = 0.001;
  a.strategy = AdversaryStrategy::Overwrite;
  a.forged_message = tile("CUT ALL THE POWER  ", message_bytes);
  a.target_identity = "A";
  cfg.adversary = a;
  return cfg;
}

ScenarioConfig overwrite_hash_scenario(std::size_t message_bytes, std::uint64_t seed) {
  ScenarioConfig cfg = overwrite_scenario(message_bytes, seed);
  cfg.variant = Variant::OneWayHash;
  return cfg;
}

ScenarioConfig injection_scenario(double jitter_window, double aim_offset, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.variant = Variant::OneWay;
  cfg.horizon = 20.0;
  cfg.jitter_window = jitter_window;
  cfg.verifiers.push_back(VerifierConfig{Point{0, 0}, 150.0, cfg.media});

  ProverSpec p;
  p.identity = "A";
  p.actual_position = Point{100, 0};
  p.claimed_location = p.actual_position;
  p.delta_p = min_processing_delay(static_cast<double>(cfg.nonce_bits), cfg.media);
  // 192 header bits + 808 message bits = 1000 bits: a 1 ms frame at b0 = 1e6.
  p.message = tile("turn on the lamp ", 101);
  cfg.provers.push_back(p);

  AdversarySpec a;
  a.position = Point{-100, 0};
  a.power = 10.0;
  a.reaction_time = 0.001;
  a.strategy = AdversaryStrategy::TimedInjection;
  a.forged_message = tile("open the gate ", 101);
  a.aim_offset = aim_offset;
  a.target_identity = "A";
  cfg.adversary = a;
  return cfg;
}

bool impersonation_succeeded(const RunResult& r) { return r.adversary_granted(); }

bool oneway_forgery_succeeded(const RunResult& r) {
  if (!r.config.adversary) return false;
  const auto forged = to_bytes(r.config.adversary->forged_message);
  for (const auto& m : r.processed_for(r.config.adversary->target_identity))
    if (m == forged) return true;
  return false;
}

bool overwrite_spliced(const RunResult& r) {
  if (!r.config.adversary) return false;
  const std::string& target = r.config.adversary->target_identity;
  std::vector<std::uint8_t> sent;
  for (const ProverSpec& p : r.config.provers)
    if (p.identity == target) sent = to_bytes(p.message);
  for (const auto& m : r.processed_for(target))
    if (m != sent) return true;
  return false;
}

bool injection_hit(const RunResult& r) { return oneway_forgery_succeeded(r); }

std::vector<MatrixCell> attack_matrix(int runs_per_cell, bool parallel) {
  struct CellSpec {
    std::string protocol;
    std::string strategy;
    ScenarioConfig (*make)(std::uint64_t);
    bool (*succeeded)(const RunResult&);
  };
  static const CellSpec specs[] = {
      {"echo+plain", "impersonate", baseline_attack_scenario, impersonation_succeeded},
      {"echo+shared-key", "impersonate",
       [](std::uint64_t s) { return defense_scenario(AccessMode::SharedKey, s); },
       impersonation_succeeded},
      {"echo+public-key", "impersonate",
       [](std::uint64_t s) { return defense_scenario(AccessMode::PublicKey, s); },
       impersonation_succeeded},
      {"oneway", "impersonate", oneway_defense_scenario, oneway_forgery_succeeded},
      {"oneway", "overwrite 10ms frame",
       [](std::uint64_t s) { return overwrite_scenario(1250, s); }, overwrite_spliced},
      {"oneway", "overwrite 0.5ms frame",
       [](std::uint64_t s) { return overwrite_scenario(62, s); }, overwrite_spliced},
      {"oneway+hash", "overwrite 10ms frame",
       [](std::uint64_t s) { return overwrite_hash_scenario(1250, s); }, overwrite_spliced},
      {"oneway", "injection, no jitter",
       [](std::uint64_t s) { return injection_scenario(0.0, 0.0, s); }, injection_hit},
      {"oneway", "injection, 100ms jitter",
       [](std::uint64_t s) { return injection_scenario(0.1, 0.05, s); }, injection_hit},
  };

  std::vector<MatrixCell> cells;
  for (const CellSpec& spec : specs) {
    MatrixCell cell{spec.protocol, spec.strategy, runs_per_cell, 0};
    int successes = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : successes) if (parallel)
    for (int i = 0; i < runs_per_cell; ++i) {
      const RunResult r = run_scenario(spec.make(static_cast<std::uint64_t>(i) + 1));
      if (spec.succeeded(r)) ++successes;
    }
    cell.adversary_successes = successes;
    cells.push_back(cell);
  }
  return cells;
}

std::string render_matrix(const std::vector<MatrixCell>& cells) {
  std::ostringstream oss;
  oss << "protocol          strategy                  runs  adversary-successes\n";
  for (const MatrixCell& c : cells) {
    oss << c.protocol;
    for (std::size_t i = c.protocol.size(); i < 18; ++i) oss << ' ';
    oss << c.strategy;
    for (std::size_t i = c.strategy.size(); i < 26; ++i) oss << ' ';
    std::string runs = std::to_string(c.runs);
    oss << runs;
    for (std::size_t i = runs.size(); i < 6; ++i) oss << ' ';
    oss << c.adversary_successes << "\n";
  }
  return oss.str();
}

}  // namespace echosim
