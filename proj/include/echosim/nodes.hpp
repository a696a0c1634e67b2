#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "echosim/access.hpp"
#include "echosim/kernel.hpp"
#include "echosim/protocol.hpp"
#include "echosim/scenario.hpp"

namespace echosim {

// Structured outcome of one decision, mirrored into the trace.
struct VerdictEntry {
  double time = 0.0;
  std::string verifier;   // deciding node label
  std::string identity;   // identity the verdict concerns
  std::string verdict;    // accept|reject|abort|processed|dropped|rejected|grant|deny
  std::string reason;
  std::string requester;  // physical sender label, for access verdicts
  std::vector<std::uint8_t> message;  // processed payload, when any
};

struct VerdictLog {
  std::vector<VerdictEntry> entries;

  void add(VerdictEntry e) { entries.push_back(std::move(e)); }
};

// Per-run wiring shared by all behaviors.
struct ProtocolContext {
  const ScenarioConfig* cfg = nullptr;
  KeyRegistry* registry = nullptr;
  VerdictLog* verdicts = nullptr;
};

std::string printable(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> to_bytes(const std::string& s);

// Prover state machine: initiate a claim, echo the challenge, then follow the
// variant's tail (access request, or the long message of the hash flow).
// A cheating prover lies about position/budget in its claim and answers with
// the fastest physically-consistent echo.
class ProverBehavior : public NodeBehavior {
 public:
  ProverBehavior(ProverSpec spec, ProtocolContext ctx, std::optional<SecretKey> key)
      : spec_(std::move(spec)), ctx_(ctx), key_(key) {}

  void on_start(Simulation& sim, NodeId self) override;
  void on_reception(Simulation& sim, NodeId self, const Reception& r,
                    const Transmission& tx) override;

 private:
  LocationClaim claim() const;
  void initiate(Simulation& sim, NodeId self);
  void handle_challenge(Simulation& sim, NodeId self, const Reception& r, const Transmission& tx);
  void handle_access_challenge(Simulation& sim, NodeId self, const Reception& r);

  ProverSpec spec_;
  ProtocolContext ctx_;
  std::optional<SecretKey> key_;
  bool pending_ = false;
  bool access_requested_ = false;
};

// Verifier state machine: select-and-challenge on claims, time the echo,
// decide, then run the variant's back half (grant flow or hash window).
class VerifierBehavior : public NodeBehavior {
 public:
  VerifierBehavior(std::size_t index, ProtocolContext ctx);

  void on_start(Simulation& sim, NodeId self) override;
  void on_reception(Simulation& sim, NodeId self, const Reception& r,
                    const Transmission& tx) override;

  const AccessState& access_state() const { return access_; }

 private:
  struct Session {
    LocationClaim claim;
    Nonce nonce;
    double t_s = 0.0;
    std::optional<double> t_f;
    std::optional<BitString> received;
    bool decided = false;
    std::vector<std::uint8_t> message;    // oneway payload
    std::optional<std::uint64_t> digest;  // hash-command digest
    std::uint64_t serial = 0;
  };

  struct HashWindow {
    std::uint64_t digest = 0;
    double close = 0.0;
    bool consumed = false;
  };

  void handle_claim(Simulation& sim, NodeId self, const Reception& r, const Transmission& tx);
  void handle_echo(Simulation& sim, NodeId self, const Reception& r, const Transmission& tx);
  void handle_access_request(Simulation& sim, NodeId self, const Reception& r,
                             const Transmission& tx);
  void handle_data(Simulation& sim, NodeId self, const Reception& r, const Transmission& tx);
  void decide(Simulation& sim, NodeId self, Session& s);
  void issue_access_challenge(Simulation& sim, NodeId self, const Identity& id);
  void verdict(Simulation& sim, NodeId self, VerdictEntry e);

  std::size_t index_;
  ProtocolContext ctx_;
  VerifierConfig cfg_;
  std::map<std::string, Session> sessions_;
  std::map<std::string, HashWindow> windows_;
  AccessState access_;
  std::uint64_t next_serial_ = 1;
};

}  // namespace echosim
