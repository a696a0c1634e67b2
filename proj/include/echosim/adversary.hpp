#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "echosim/kernel.hpp"
#include "echosim/nodes.hpp"
#include "echosim/scenario.hpp"

namespace echosim {

// What the adversary has picked up off the air.
struct AdversaryKnowledge {
  std::set<std::string> identities;
  std::vector<WireRequest> captured_requests;
};

// Adversary strategies. Deliberately narrow interface: the constructor takes
// only the strategy spec and the public scenario configuration, so neither
// key handles nor the run's random generator are reachable from adversary
// code, and every emission goes through the same kernel physics as honest
// traffic.
//
//   Eavesdrop+Impersonate: learn the identity during verification, then send
//     a forged plain-transform request (echo variant) or a forged one-way
//     claim answered with the fastest physical echo; captured tagged requests
//     are replayed verbatim.
//   Overwrite: hear a message frame start, wait out the reaction time, then
//     lay higher-power forged bits over the remainder of the frame at the
//     verifier.
//   TimedInjection: fire a complete forged claim at the predicted initiation
//     time, displacing the victim's frame if the guess lands.
class AdversaryBehavior : public NodeBehavior {
 public:
  AdversaryBehavior(AdversarySpec spec, const ScenarioConfig* cfg);

  void on_start(Simulation& sim, NodeId self) override;
  void on_signal_start(Simulation& sim, NodeId self, const Reception& r,
                       const Transmission& tx) override;
  void on_reception(Simulation& sim, NodeId self, const Reception& r,
                    const Transmission& tx) override;

  const AdversaryKnowledge& knowledge() const { return knowledge_; }

 private:
  const ProverSpec* target_spec() const;
  void eavesdrop(Simulation& sim, NodeId self, const Reception& r, const Transmission& tx);
  void schedule_impersonation(Simulation& sim, NodeId self);
  void schedule_forged_oneway(Simulation& sim, NodeId self);
  void launch_overwrite(Simulation& sim, NodeId self, const Reception& r, const Transmission& tx);

  AdversarySpec spec_;
  const ScenarioConfig* cfg_;
  AdversaryKnowledge knowledge_;
  bool impersonation_scheduled_ = false;
  bool replay_scheduled_ = false;
  bool forged_claim_pending_ = false;
  std::set<std::size_t> attacked_txs_;
  std::optional<std::size_t> hash_target_verifier_;
};

}  // namespace echosim
