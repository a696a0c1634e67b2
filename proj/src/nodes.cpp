#include "echosim/nodes.hpp"

#include "echosim/oneway.hpp"

namespace echosim {

std::string printable(const std::vector<std::uint8_t>& bytes) {
  std::string s;
  s.reserve(bytes.size());
  for (std::uint8_t b : bytes) s.push_back(b >= 0x20 && b < 0x7f ? static_cast<char>(b) : '.');
  return s;
}

std::vector<std::uint8_t> to_bytes(const std::string& s) {
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

LocationClaim ProverBehavior::claim() const {
  return LocationClaim{spec_.claimed_location, spec_.delta_p, Identity{spec_.identity}};
}

void ProverBehavior::on_start(Simulation& sim, NodeId self) {
  double start = spec_.start_time;
  // One-way initiators jitter their start so it is not precisely predictable.
  if (ctx_.cfg->variant != Variant::Echo && ctx_.cfg->jitter_window > 0)
    start += sim.rng().uniform(0.0, ctx_.cfg->jitter_window);
  sim.schedule(start, [this, self](Simulation& s) { initiate(s, self); });
}

void ProverBehavior::initiate(Simulation& sim, NodeId self) {
  pending_ = true;
  ProtocolMessage msg;
  switch (ctx_.cfg->variant) {
    case Variant::Echo:
      msg = ClaimMsg{claim()};
      break;
    case Variant::OneWay:
      msg = OneWayClaimMsg{to_bytes(spec_.message), claim()};
      break;
    case Variant::OneWayHash: {
      const auto body = to_bytes(spec_.message);
      msg = HashCommandMsg{hash64(body), claim()};
      break;
    }
  }
  sim.record(TraceKind::StateTransition, self,
             {{"event", "initiate"}, {"identity", spec_.identity}});
  sim.schedule_transmission(Transmission{self, Medium::Radio, encode_message(msg), 1.0, sim.now(),
                                         Envelope{kind_of(msg), Identity{spec_.identity}}});
}

void ProverBehavior::on_reception(Simulation& sim, NodeId self, const Reception& r,
                                  const Transmission& tx) {
  switch (tx.envelope.kind) {
    case MessageKind::Challenge:
      handle_challenge(sim, self, r, tx);
      break;
    case MessageKind::AccessChallenge:
      if (tx.envelope.identity.value == spec_.identity) handle_access_challenge(sim, self, r);
      break;
    default:
      break;
  }
}

void ProverBehavior::handle_challenge(Simulation& sim, NodeId self, const Reception& r,
                                      const Transmission& tx) {
  if (tx.envelope.identity.value != spec_.identity || !pending_) return;
  pending_ = false;

  // Echo whatever was heard, garble included; capture damage is undetectable.
  const BitString& heard = r.payload_as_received;
  const double reply_duration = transmission_duration(static_cast<double>(heard.size()),
                                                      ctx_.cfg->media.sound_bandwidth);
  double emit, done;  // emission start / emission-complete instants
  if (spec_.honesty == Honesty::Honest) {
    // Total prover-side latency from challenge arrival_start to
    // emission-complete equals the declared budget.
    done = r.arrival_start + spec_.delta_p;
    emit = done - reply_duration;
  } else {
    emit = floor_reply_emit(r.arrival_start, static_cast<double>(heard.size()), ctx_.cfg->media);
    done = emit + reply_duration;
  }
  sim.schedule_transmission(Transmission{self, Medium::Ultrasound, heard, 1.0, emit,
                                         Envelope{MessageKind::EchoReply, Identity{spec_.identity}}});

  // Tail of the flow, timed for after the verifier has decided: the echo
  // lands at done + d/s.
  const double settle =
      done + propagation_delay(distance(sim.node_position(self), sim.node_position(tx.sender)),
                               ctx_.cfg->media.sound_speed) +
      0.01;
  if (ctx_.cfg->variant == Variant::OneWayHash && spec_.followup) {
    sim.schedule(settle, [this, self](Simulation& s) {
      const DataMsg data{to_bytes(spec_.message)};
      s.schedule_transmission(Transmission{self, Medium::Radio, encode_message({data}), 1.0,
                                           s.now(),
                                           Envelope{MessageKind::DataMessage,
                                                    Identity{spec_.identity}}});
    });
  }
  // An empty message means the prover wants verification only.
  if (ctx_.cfg->variant == Variant::Echo && ctx_.cfg->mode == AccessMode::Plain &&
      !access_requested_ && !spec_.message.empty()) {
    access_requested_ = true;
    sim.schedule(settle, [this, self](Simulation& s) {
      const AccessRequestMsg req{f_plain(Identity{spec_.identity}, to_bytes(spec_.message))};
      s.record(TraceKind::StateTransition, self,
               {{"event", "access-request"}, {"identity", spec_.identity}});
      s.schedule_transmission(Transmission{self, Medium::Radio, encode_message({req}), 1.0,
                                           s.now(),
                                           Envelope{MessageKind::AccessRequest,
                                                    Identity{spec_.identity}}});
    });
  }
}

void ProverBehavior::handle_access_challenge(Simulation& sim, NodeId self, const Reception& r) {
  if (ctx_.cfg->mode == AccessMode::Plain || !key_ || access_requested_ || spec_.message.empty())
    return;
  auto msg = decode_message(MessageKind::AccessChallenge, r.payload_as_received);
  if (!msg) return;
  const Nonce challenge = std::get<AccessChallengeMsg>(*msg).nonce;
  access_requested_ = true;
  const AccessRequestMsg req{
      f_keyed(Identity{spec_.identity}, *key_, to_bytes(spec_.message), challenge,
              *ctx_.registry)};
  sim.record(TraceKind::StateTransition, self,
             {{"event", "access-request"}, {"identity", spec_.identity}});
  sim.schedule_transmission(Transmission{self, Medium::Radio, encode_message({req}), 1.0,
                                         sim.now(),
                                         Envelope{MessageKind::AccessRequest,
                                                  Identity{spec_.identity}}});
}

VerifierBehavior::VerifierBehavior(std::size_t index, ProtocolContext ctx)
    : index_(index), ctx_(ctx), cfg_(ctx.cfg->verifiers.at(index)) {
  access_.validity = ctx_.cfg->verification_validity;
}

void VerifierBehavior::on_start(Simulation&, NodeId) {}

void VerifierBehavior::on_reception(Simulation& sim, NodeId self, const Reception& r,
                                    const Transmission& tx) {
  switch (tx.envelope.kind) {
    case MessageKind::Claim:
    case MessageKind::OneWayClaim:
    case MessageKind::HashCommand:
      handle_claim(sim, self, r, tx);
      break;
    case MessageKind::EchoReply:
      handle_echo(sim, self, r, tx);
      break;
    case MessageKind::AccessRequest:
      handle_access_request(sim, self, r, tx);
      break;
    case MessageKind::DataMessage:
      handle_data(sim, self, r, tx);
      break;
    default:
      break;
  }
}

void VerifierBehavior::verdict(Simulation& sim, NodeId self, VerdictEntry e) {
  e.time = sim.now();
  e.verifier = sim.node_label(self);
  sim.record(TraceKind::Verdict, self,
             {{"verdict", e.verdict},
              {"reason", e.reason},
              {"identity", e.identity},
              {"requester", e.requester},
              {"message", printable(e.message)}});
  ctx_.verdicts->add(std::move(e));
}

void VerifierBehavior::handle_claim(Simulation& sim, NodeId self, const Reception& r,
                                    const Transmission& tx) {
  // Only the variant's own initiation frame opens a session.
  const MessageKind expected = ctx_.cfg->variant == Variant::Echo      ? MessageKind::Claim
                               : ctx_.cfg->variant == Variant::OneWay ? MessageKind::OneWayClaim
                                                                      : MessageKind::HashCommand;
  if (tx.envelope.kind != expected) return;
  auto msg = decode_message(tx.envelope.kind, r.payload_as_received);
  if (!msg) return;  // frame destroyed on the air

  LocationClaim claim;
  std::vector<std::uint8_t> message;
  std::optional<std::uint64_t> digest;
  if (tx.envelope.kind == MessageKind::Claim) {
    claim = std::get<ClaimMsg>(*msg).claim;
  } else if (tx.envelope.kind == MessageKind::OneWayClaim) {
    claim = std::get<OneWayClaimMsg>(*msg).claim;
    message = std::get<OneWayClaimMsg>(*msg).message;
  } else {
    claim = std::get<HashCommandMsg>(*msg).claim;
    digest = std::get<HashCommandMsg>(*msg).digest;
  }
  claim.identity = tx.envelope.identity;

  const auto selected =
      select_verifier(claim, ctx_.cfg->verifiers, static_cast<double>(ctx_.cfg->nonce_bits));
  if (!selected) {
    // Nobody can serve this claim; the first verifier logs the abort.
    if (index_ == 0)
      verdict(sim, self, VerdictEntry{0, "", claim.identity.value, "abort", "", "", {}});
    return;
  }
  if (*selected != index_) return;

  auto active = sessions_.find(claim.identity.value);
  if (active != sessions_.end() && !active->second.decided) {
    sim.record(TraceKind::StateTransition, self,
               {{"event", "claim-ignored"}, {"identity", claim.identity.value},
                {"why", "session-busy"}});
    return;
  }

  Session s;
  s.claim = claim;
  s.t_s = sim.now();  // timer starts right before the challenge goes out
  s.nonce = generate_nonce(sim.rng(), ctx_.cfg->nonce_bits);
  s.message = std::move(message);
  s.digest = digest;
  s.serial = next_serial_++;
  sessions_[claim.identity.value] = s;

  sim.record(TraceKind::StateTransition, self,
             {{"event", "session-open"}, {"identity", claim.identity.value}, {"t_s", s.t_s}});
  sim.schedule_transmission(Transmission{self, Medium::Radio, s.nonce.bits, 1.0, sim.now(),
                                         Envelope{MessageKind::Challenge, claim.identity}});

  const double d = distance(cfg_.position, claim.claimed_location);
  const double timeout =
      2.0 * round_trip_bound(d, cfg_.media, claim.processing_delay);
  const std::string id = claim.identity.value;
  const std::uint64_t serial = s.serial;
  sim.schedule(sim.now() + timeout, [this, self, id, serial](Simulation& s2) {
    auto it = sessions_.find(id);
    if (it == sessions_.end() || it->second.serial != serial || it->second.decided) return;
    decide(s2, self, it->second);
  });
}

void VerifierBehavior::handle_echo(Simulation& sim, NodeId self, const Reception& r,
                                   const Transmission& tx) {
  auto it = sessions_.find(tx.envelope.identity.value);
  if (it == sessions_.end() || it->second.decided) return;
  it->second.t_f = r.arrival_end;  // finish time is the echo's arrival_end
  it->second.received = r.payload_as_received;
  decide(sim, self, it->second);
}

void VerifierBehavior::decide(Simulation& sim, NodeId self, Session& s) {
  s.decided = true;
  const double n = static_cast<double>(ctx_.cfg->nonce_bits);
  const VerifierSession view{s.claim, s.nonce, s.t_s, s.t_f, s.received};
  const std::string id = s.claim.identity.value;

  switch (ctx_.cfg->variant) {
    case Variant::Echo: {
      const LocationVerdict v = verifier_decide(view, cfg_, n);
      verdict(sim, self,
              VerdictEntry{0, "", id, v.accepted ? "accept" : "reject",
                           v.reason ? to_string(*v.reason) : "", "", {}});
      if (v.accepted) {
        access_.verified_at[id] = sim.now();
        if (ctx_.cfg->mode != AccessMode::Plain) issue_access_challenge(sim, self, s.claim.identity);
      }
      break;
    }
    case Variant::OneWay: {
      const OneWayOutcome o = oneway_decide(view, cfg_, n, s.message);
      verdict(sim, self,
              VerdictEntry{0, "", id, o.processed ? "processed" : "dropped",
                           o.reason ? to_string(*o.reason) : "", "", o.message});
      break;
    }
    case Variant::OneWayHash: {
      const LocationVerdict v = verifier_decide(view, cfg_, n);
      if (!v.accepted) {
        verdict(sim, self,
                VerdictEntry{0, "", id, "dropped", v.reason ? to_string(*v.reason) : "", "", {}});
        break;
      }
      windows_[id] = HashWindow{*s.digest, sim.now() + ctx_.cfg->hash_window, false};
      sim.record(TraceKind::StateTransition, self,
                 {{"event", "hash-window-open"}, {"identity", id},
                  {"close", sim.now() + ctx_.cfg->hash_window}});
      sim.schedule(windows_[id].close, [this, self, id](Simulation& s2) {
        auto w = windows_.find(id);
        if (w == windows_.end() || w->second.consumed) return;
        w->second.consumed = true;
        verdict(s2, self, VerdictEntry{0, "", id, "dropped", "window-expired", "", {}});
      });
      break;
    }
  }
}

void VerifierBehavior::issue_access_challenge(Simulation& sim, NodeId self, const Identity& id) {
  access_.current_challenge = generate_nonce(sim.rng(), ctx_.cfg->nonce_bits);
  sim.record(TraceKind::StateTransition, self,
             {{"event", "access-challenge"}, {"identity", id.value}});
  sim.schedule_transmission(Transmission{self, Medium::Radio, access_.current_challenge.bits, 1.0,
                                         sim.now(),
                                         Envelope{MessageKind::AccessChallenge, id}});
}

void VerifierBehavior::handle_access_request(Simulation& sim, NodeId self, const Reception& r,
                                             const Transmission& tx) {
  if (ctx_.cfg->variant != Variant::Echo) return;  // no post-verification channel otherwise
  auto msg = decode_message(MessageKind::AccessRequest, r.payload_as_received);
  if (!msg) return;
  const WireRequest& req = std::get<AccessRequestMsg>(*msg).request;
  const AccessDecision d =
      verify_request(req, ctx_.cfg->mode, *ctx_.registry, access_, sim.now());
  verdict(sim, self,
          VerdictEntry{0, "", req.identity.value, d.granted ? "grant" : "deny", d.deny_reason,
                       sim.node_label(tx.sender), req.body});
  const ProtocolMessage reply =
      d.granted ? ProtocolMessage{GrantMsg{}} : ProtocolMessage{DenyMsg{}};
  sim.schedule_transmission(Transmission{self, Medium::Radio, encode_message(reply), 1.0,
                                         sim.now(),
                                         Envelope{d.granted ? MessageKind::Grant
                                                            : MessageKind::Deny,
                                                  req.identity}});
  // A grant closes its window; the next window gets a fresh challenge.
  if (d.granted && ctx_.cfg->mode != AccessMode::Plain)
    issue_access_challenge(sim, self, req.identity);
}

void VerifierBehavior::handle_data(Simulation& sim, NodeId self, const Reception& r,
                                   const Transmission& tx) {
  if (ctx_.cfg->variant != Variant::OneWayHash) return;
  const std::string id = tx.envelope.identity.value;
  auto w = windows_.find(id);
  if (w == windows_.end() || w->second.consumed || sim.now() > w->second.close) {
    sim.record(TraceKind::StateTransition, self,
               {{"event", "data-ignored"}, {"identity", id}, {"why", "no-open-window"}});
    return;
  }
  w->second.consumed = true;  // the window admits exactly one message
  const auto bytes = r.payload_as_received.to_bytes();
  if (bytes && hash64(*bytes) == w->second.digest) {
    verdict(sim, self, VerdictEntry{0, "", id, "processed", "", "", *bytes});
  } else {
    verdict(sim, self,
            VerdictEntry{0, "", id, "rejected", "hash-mismatch", sim.node_label(tx.sender), {}});
  }
}

}  // namespace echosim
