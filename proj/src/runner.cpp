#include "echosim/runner.hpp"

#include <memory>
#include <ostream>
#include <sstream>

#include "echosim/adversary.hpp"
#include "echosim/kernel.hpp"

namespace echosim {

bool RunResult::adversary_granted() const {
  for (const VerdictEntry& e : verdicts)
    if (e.verdict == "grant" && e.requester == "adv") return true;
  return false;
}

std::vector<std::vector<std::uint8_t>> RunResult::processed_for(
    const std::string& identity) const {
  std::vector<std::vector<std::uint8_t>> out;
  for (const VerdictEntry& e : verdicts)
    if (e.verdict == "processed" && e.identity == identity) out.push_back(e.message);
  return out;
}

ImpersonationConditions impersonation_conditions(const ScenarioConfig& cfg) {
  ImpersonationConditions c;
  // Identities ride every verification message in clear on broadcast media.
  c.exposed = !cfg.provers.empty() && !cfg.verifiers.empty();
  c.computable = cfg.mode == AccessMode::Plain;
  c.accepted_any_time = cfg.variant == Variant::Echo;
  return c;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  RunResult result;
  result.config = cfg;

  Simulation sim(cfg.media, cfg.seed, cfg.horizon);
  KeyRegistry registry;
  VerdictLog log;
  ProtocolContext ctx{&cfg, &registry, &log};

  std::vector<std::unique_ptr<NodeBehavior>> behaviors;
  for (std::size_t i = 0; i < cfg.verifiers.size(); ++i) {
    behaviors.push_back(std::make_unique<VerifierBehavior>(i, ctx));
    sim.add_node("v" + std::to_string(i), cfg.verifiers[i].position, behaviors.back().get());
  }
  for (const ProverSpec& p : cfg.provers) {
    std::optional<SecretKey> key;
    if (cfg.mode == AccessMode::SharedKey) key = registry.register_shared_key(Identity{p.identity});
    if (cfg.mode == AccessMode::PublicKey) key = registry.create_keypair(Identity{p.identity});
    behaviors.push_back(std::make_unique<ProverBehavior>(p, ctx, key));
    sim.add_node("p:" + p.identity, p.actual_position, behaviors.back().get());
  }
  if (cfg.adversary) {
    behaviors.push_back(std::make_unique<AdversaryBehavior>(*cfg.adversary, &cfg));
    sim.add_node("adv", cfg.adversary->position, behaviors.back().get());
  }

  sim.run();

  result.trace = std::move(sim.trace());
  result.verdicts = std::move(log.entries);

  Metrics& m = result.metrics;
  for (const VerdictEntry& e : result.verdicts) {
    if (e.verdict == "accept") ++m.accepts;
    else if (e.verdict == "reject") {
      if (e.reason == "nonce-mismatch") ++m.rejects_nonce;
      else if (e.reason == "too-slow") ++m.rejects_too_slow;
      else ++m.rejects_timeout;
    } else if (e.verdict == "abort") ++m.aborts;
    else if (e.verdict == "processed") ++m.processed;
    else if (e.verdict == "dropped") {
      if (e.reason == "window-expired") ++m.expired_windows;
      else ++m.dropped;
    } else if (e.verdict == "rejected") ++m.rejected_hash;
    else if (e.verdict == "grant") {
      if (e.requester == "adv") ++m.grants_adversary;
      else ++m.grants_prover;
    } else if (e.verdict == "deny") ++m.denies;
  }
  for (const TraceRecord& rec : result.trace.records) {
    if (rec.kind != TraceKind::StateTransition) continue;
    const auto it = rec.detail.find("event");
    if (it == rec.detail.end()) continue;
    if (*it == "claim-ignored") ++m.claims_ignored;
    if (*it == "overwrite-missed") ++m.overwrite_missed;
  }
  return result;
}

void write_trace(std::ostream& out, const ScenarioConfig& cfg, const Trace& trace) {
  out << "{\"scenario\":" << scenario_to_json(cfg) << "}\n";
  emit_trace(trace, out);
}

std::string trace_to_string(const ScenarioConfig& cfg, const Trace& trace) {
  std::ostringstream oss;
  write_trace(oss, cfg, trace);
  return oss.str();
}

std::string render_verdict(const VerdictEntry& e) {
  std::string s = e.verdict;
  if (!e.reason.empty()) s += ":" + e.reason;
  s += "@" + e.identity;
  if (!e.requester.empty()) s += "<" + e.requester;
  return s;
}

std::vector<SweepEntry> run_sweep(const ScenarioConfig& cfg, std::uint64_t base_seed,
                                  std::size_t count, bool parallel) {
  std::vector<SweepEntry> out(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    ScenarioConfig c = cfg;
    c.seed = base_seed + static_cast<std::uint64_t>(i);
    const RunResult r = run_scenario(c);
    SweepEntry& e = out[static_cast<std::size_t>(i)];
    e.seed = c.seed;
    e.metrics = r.metrics;
    for (const VerdictEntry& v : r.verdicts) e.verdicts.push_back(render_verdict(v));
  }
  return out;
}

}  // namespace echosim
