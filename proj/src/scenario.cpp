#include "echosim/scenario.hpp"

#include <set>

#include <json.hpp>

namespace echosim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Tracks which keys of an object were consumed; leftovers are schema errors.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const char* key) {
    if (!j_.contains(key)) return false;
    seen_.insert(key);
    return true;
  }

  const json& get(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  const json& require(const char* key) {
    if (!j_.contains(key)) throw ConfigError(path_ + ": missing required field \"" + key + "\"");
    return get(key);
  }

  double number(const char* key, double fallback) {
    if (!has(key)) return fallback;
    return as_number(j_.at(key), key);
  }

  double require_number(const char* key) { return as_number(require(key), key); }

  std::uint64_t u64(const char* key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned())
      throw ConfigError(path_ + "." + key + ": expected an unsigned integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const char* key, std::string fallback) {
    if (!has(key)) return fallback;
    return require_string(key);
  }

  std::string require_string(const char* key) {
    const json& v = require(key);
    if (!v.is_string()) throw ConfigError(path_ + "." + key + ": expected a string");
    return v.get<std::string>();
  }

  bool boolean(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(path_ + "." + key + ": expected a boolean");
    return v.get<bool>();
  }

  Point point(const char* key, Point fallback) {
    if (!has(key)) return fallback;
    return as_point(j_.at(key), key);
  }

  Point require_point(const char* key) { return as_point(require(key), key); }

  void finish() {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.contains(it.key()))
        throw ConfigError(path_ + ": unknown field \"" + it.key() + "\"");
  }

  const std::string& path() const { return path_; }

 private:
  double as_number(const json& v, const char* key) {
    if (!v.is_number()) throw ConfigError(path_ + "." + key + ": expected a number");
    return v.get<double>();
  }

  Point as_point(const json& v, const char* key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(path_ + "." + key + ": expected [x, y]");
    return Point{v[0].get<double>(), v[1].get<double>()};
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Variant parse_variant(const std::string& s, const std::string& path) {
  if (s == "echo") return Variant::Echo;
  if (s == "oneway") return Variant::OneWay;
  if (s == "oneway+hash") return Variant::OneWayHash;
  throw ConfigError(path + ": variant must be \"echo\", \"oneway\" or \"oneway+hash\"");
}

AccessMode parse_mode(const std::string& s, const std::string& path) {
  if (s == "plain") return AccessMode::Plain;
  if (s == "shared-key") return AccessMode::SharedKey;
  if (s == "public-key") return AccessMode::PublicKey;
  throw ConfigError(path + ": mode must be \"plain\", \"shared-key\" or \"public-key\"");
}

Honesty parse_honesty(const std::string& s, const std::string& path) {
  if (s == "honest") return Honesty::Honest;
  if (s == "cheat") return Honesty::Cheat;
  throw ConfigError(path + ": honesty must be \"honest\" or \"cheat\"");
}

AdversaryStrategy parse_strategy(const std::string& s, const std::string& path) {
  if (s == "eavesdrop-impersonate") return AdversaryStrategy::EavesdropImpersonate;
  if (s == "overwrite") return AdversaryStrategy::Overwrite;
  if (s == "timed-injection") return AdversaryStrategy::TimedInjection;
  throw ConfigError(path +
                    ": strategy must be \"eavesdrop-impersonate\", \"overwrite\" or "
                    "\"timed-injection\"");
}

ordered_json point_json(const Point& p) { return ordered_json::array({p.x, p.y}); }

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::Echo: return "echo";
    case Variant::OneWay: return "oneway";
    case Variant::OneWayHash: return "oneway+hash";
  }
  return "?";
}

const char* to_string(Honesty h) { return h == Honesty::Honest ? "honest" : "cheat"; }

const char* to_string(AdversaryStrategy s) {
  switch (s) {
    case AdversaryStrategy::EavesdropImpersonate: return "eavesdrop-impersonate";
    case AdversaryStrategy::Overwrite: return "overwrite";
    case AdversaryStrategy::TimedInjection: return "timed-injection";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  try {
    media.validate();
  } catch (const InvalidParameterError& e) {
    throw ConfigError(e.what());
  }
  if (nonce_bits < 1) throw ConfigError("nonce_bits: must be >= 1");
  if (!(horizon > 0)) throw ConfigError("horizon: must be > 0");
  if (jitter_window < 0) throw ConfigError("jitter_window: must be >= 0");
  if (!(hash_window > 0)) throw ConfigError("hash_window: must be > 0");
  if (verification_validity && !(*verification_validity > 0))
    throw ConfigError("verification_validity: must be > 0 when present");

  for (std::size_t i = 0; i < verifiers.size(); ++i) {
    try {
      verifiers[i].validate();
    } catch (const InvalidParameterError& e) {
      throw ConfigError("verifiers[" + std::to_string(i) + "]: " + e.what());
    }
    if (verifiers[i].media != media)
      throw ConfigError("verifiers[" + std::to_string(i) + "]: media must match scenario media");
  }

  std::set<std::string> ids;
  for (std::size_t i = 0; i < provers.size(); ++i) {
    const ProverSpec& p = provers[i];
    const std::string where = "provers[" + std::to_string(i) + "]";
    if (p.identity.empty()) throw ConfigError(where + ": identity must be nonempty");
    if (!ids.insert(p.identity).second)
      throw ConfigError(where + ": duplicate prover identity \"" + p.identity + "\"");
    if (!is_finite(p.actual_position) || !is_finite(p.claimed_location))
      throw ConfigError(where + ": positions must be finite");
    if (p.delta_p < 0) throw ConfigError(where + ": delta_p must be >= 0");
    if (p.start_time < 0) throw ConfigError(where + ": start_time must be >= 0");
    if (variant != Variant::Echo && p.message.empty())
      throw ConfigError(where + ": message must be nonempty for one-way variants");
  }

  if (adversary) {
    const AdversarySpec& a = *adversary;
    if (!is_finite(a.position)) throw ConfigError("adversary.position: must be finite");
    if (!(a.power > 0)) throw ConfigError("adversary.power: must be > 0");
    if (a.reaction_time < 0) throw ConfigError("adversary.reaction_time: must be >= 0");
    if (a.aim_offset < 0) throw ConfigError("adversary.aim_offset: must be >= 0");
    if (a.forged_message.empty()) throw ConfigError("adversary.forged_message: must be nonempty");
    if (!a.target_identity.empty() && !ids.contains(a.target_identity))
      throw ConfigError("adversary.target_identity: no prover named \"" + a.target_identity +
                        "\"");
    if (a.strategy != AdversaryStrategy::EavesdropImpersonate && variant == Variant::Echo)
      throw ConfigError("adversary.strategy: overwrite and timed-injection require a one-way "
                        "variant");
    if (a.strategy == AdversaryStrategy::Overwrite && variant == Variant::OneWay) {
      // splice alignment needs equal frame lengths
      const auto target = a.target_identity.empty()
                              ? (provers.empty() ? std::string() : provers.front().identity)
                              : a.target_identity;
      for (const ProverSpec& p : provers)
        if (p.identity == target && p.message.size() != a.forged_message.size())
          throw ConfigError(
              "adversary.forged_message: must match the target's message length for overwrite");
    }
  }
}

ScenarioConfig parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }

  ScenarioConfig cfg;
  ObjectReader r(root, "scenario");

  if (r.has("media")) {
    ObjectReader m(root.at("media"), "media");
    cfg.media.radio_speed = m.number("radio_speed", cfg.media.radio_speed);
    cfg.media.sound_speed = m.number("sound_speed", cfg.media.sound_speed);
    cfg.media.radio_bandwidth = m.number("radio_bandwidth", cfg.media.radio_bandwidth);
    cfg.media.sound_bandwidth = m.number("sound_bandwidth", cfg.media.sound_bandwidth);
    m.finish();
  }

  cfg.nonce_bits = static_cast<std::size_t>(r.u64("nonce_bits", cfg.nonce_bits));
  if (r.has("variant")) cfg.variant = parse_variant(r.require_string("variant"), "scenario.variant");
  if (r.has("mode")) cfg.mode = parse_mode(r.require_string("mode"), "scenario.mode");
  cfg.seed = r.u64("seed", cfg.seed);
  cfg.horizon = r.number("horizon", cfg.horizon);
  cfg.jitter_window = r.number("jitter_window", cfg.jitter_window);
  cfg.hash_window = r.number("hash_window", cfg.hash_window);
  if (r.has("verification_validity"))
    cfg.verification_validity = r.number("verification_validity", 0.0);

  if (r.has("verifiers")) {
    const json& arr = root.at("verifiers");
    if (!arr.is_array()) throw ConfigError("verifiers: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ObjectReader v(arr[i], "verifiers[" + std::to_string(i) + "]");
      VerifierConfig vc;
      vc.position = v.require_point("position");
      vc.acceptance_radius = v.require_number("acceptance_radius");
      vc.media = cfg.media;
      v.finish();
      cfg.verifiers.push_back(vc);
    }
  }

  if (r.has("provers")) {
    const json& arr = root.at("provers");
    if (!arr.is_array()) throw ConfigError("provers: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ObjectReader p(arr[i], "provers[" + std::to_string(i) + "]");
      ProverSpec ps;
      ps.identity = p.require_string("identity");
      ps.actual_position = p.require_point("actual_position");
      ps.claimed_location = p.point("claimed_location", ps.actual_position);
      ps.delta_p = p.number("delta_p", min_processing_delay(
                                           static_cast<double>(cfg.nonce_bits), cfg.media));
      if (p.has("honesty"))
        ps.honesty = parse_honesty(p.require_string("honesty"), p.path() + ".honesty");
      ps.message = p.string("message", ps.message);
      ps.start_time = p.number("start_time", ps.start_time);
      ps.followup = p.boolean("followup", ps.followup);
      p.finish();
      cfg.provers.push_back(std::move(ps));
    }
  }

  if (r.has("adversary")) {
    ObjectReader a(root.at("adversary"), "adversary");
    AdversarySpec as;
    as.position = a.require_point("position");
    as.power = a.number("power", as.power);
    as.reaction_time = a.number("reaction_time", as.reaction_time);
    if (a.has("strategy"))
      as.strategy = parse_strategy(a.require_string("strategy"), "adversary.strategy");
    as.forged_message = a.string("forged_message", as.forged_message);
    as.aim_offset = a.number("aim_offset", as.aim_offset);
    as.target_identity = a.string("target_identity", as.target_identity);
    a.finish();
    if (as.target_identity.empty() && !cfg.provers.empty())
      as.target_identity = cfg.provers.front().identity;
    cfg.adversary = std::move(as);
  }

  r.finish();
  cfg.validate();
  return cfg;
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  ordered_json j;
  j["media"] = {{"radio_speed", cfg.media.radio_speed},
                {"sound_speed", cfg.media.sound_speed},
                {"radio_bandwidth", cfg.media.radio_bandwidth},
                {"sound_bandwidth", cfg.media.sound_bandwidth}};
  j["nonce_bits"] = cfg.nonce_bits;
  j["variant"] = to_string(cfg.variant);
  j["mode"] = to_string(cfg.mode);
  j["seed"] = cfg.seed;
  j["horizon"] = cfg.horizon;
  j["jitter_window"] = cfg.jitter_window;
  j["hash_window"] = cfg.hash_window;
  if (cfg.verification_validity) j["verification_validity"] = *cfg.verification_validity;
  j["verifiers"] = ordered_json::array();
  for (const VerifierConfig& v : cfg.verifiers)
    j["verifiers"].push_back({{"position", point_json(v.position)},
                              {"acceptance_radius", v.acceptance_radius}});
  j["provers"] = ordered_json::array();
  for (const ProverSpec& p : cfg.provers)
    j["provers"].push_back({{"identity", p.identity},
                            {"actual_position", point_json(p.actual_position)},
                            {"claimed_location", point_json(p.claimed_location)},
                            {"delta_p", p.delta_p},
                            {"honesty", to_string(p.honesty)},
                            {"message", p.message},
                            {"start_time", p.start_time},
                            {"followup", p.followup}});
  if (cfg.adversary) {
    const AdversarySpec& a = *cfg.adversary;
    j["adversary"] = {{"position", point_json(a.position)},
                      {"power", a.power},
                      {"reaction_time", a.reaction_time},
                      {"strategy", to_string(a.strategy)},
                      {"forged_message", a.forged_message},
                      {"aim_offset", a.aim_offset},
                      {"target_identity", a.target_identity}};
  }
  return j.dump();
}

}  // namespace echosim
