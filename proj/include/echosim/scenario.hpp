#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "echosim/access.hpp"
#include "echosim/geometry.hpp"
#include "echosim/media.hpp"
#include "echosim/protocol.hpp"

namespace echosim {

enum class Variant { Echo, OneWay, OneWayHash };
enum class Honesty { Honest, Cheat };
enum class AdversaryStrategy { EavesdropImpersonate, Overwrite, TimedInjection };

const char* to_string(Variant v);
const char* to_string(Honesty h);
const char* to_string(AdversaryStrategy s);

struct ProverSpec {
  std::string identity;
  Point actual_position;
  Point claimed_location;
  double delta_p = 0.0;
  Honesty honesty = Honesty::Honest;
  std::string message = "open";  // one-way payload / access request body
  double start_time = 0.0;
  bool followup = true;  // oneway+hash: send the long message after the echo

  friend bool operator==(const ProverSpec&, const ProverSpec&) = default;
};

struct AdversarySpec {
  Point position;
  double power = 10.0;
  double reaction_time = 0.001;
  AdversaryStrategy strategy = AdversaryStrategy::EavesdropImpersonate;
  std::string forged_message = "forged";
  double aim_offset = 0.0;  // timed injection: offset from the target's base start
  std::string target_identity;

  friend bool operator==(const AdversarySpec&, const AdversarySpec&) = default;
};

struct ScenarioConfig {
  MediaParams media;
  std::size_t nonce_bits = 64;
  Variant variant = Variant::Echo;
  AccessMode mode = AccessMode::Plain;
  std::uint64_t seed = 0;
  double horizon = 10.0;
  double jitter_window = 0.1;
  std::optional<double> verification_validity;  // absent: a verification never expires
  double hash_window = 1.0;                     // oneway+hash follow-up acceptance window
  std::vector<VerifierConfig> verifiers;
  std::vector<ProverSpec> provers;
  std::optional<AdversarySpec> adversary;

  void validate() const;  // throws ConfigError naming the offending field

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Strict parse of the documented JSON schema: unknown keys are errors, as are
// constraint violations; diagnostics name the field (and line for syntax).
ScenarioConfig parse_scenario(const std::string& text);

// Canonical echo of a config; parse_scenario(scenario_to_json(c)) == c.
std::string scenario_to_json(const ScenarioConfig& cfg);

}  // namespace echosim
