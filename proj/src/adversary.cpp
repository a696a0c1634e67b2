#include "echosim/adversary.hpp"

#include <cmath>

namespace echosim {

AdversaryBehavior::AdversaryBehavior(AdversarySpec spec, const ScenarioConfig* cfg)
    : spec_(std::move(spec)), cfg_(cfg) {}

const ProverSpec* AdversaryBehavior::target_spec() const {
  for (const ProverSpec& p : cfg_->provers)
    if (p.identity == spec_.target_identity) return &p;
  return nullptr;
}

void AdversaryBehavior::on_start(Simulation& sim, NodeId self) {
  if (spec_.strategy != AdversaryStrategy::TimedInjection) return;
  const ProverSpec* victim = target_spec();
  if (!victim) return;
  // Fire a complete forged claim at the guessed initiation time. The guess is
  // configuration, not a draw: the adversary has no generator to draw from.
  const double when = victim->start_time + spec_.aim_offset;
  const OneWayClaimMsg forged{
      to_bytes(spec_.forged_message),
      LocationClaim{victim->claimed_location, victim->delta_p, Identity{victim->identity}}};
  sim.schedule(when, [this, self, forged](Simulation& s) {
    s.record(TraceKind::StateTransition, self,
             {{"event", "timed-injection"}, {"identity", forged.claim.identity.value}});
    forged_claim_pending_ = true;
    s.schedule_transmission(Transmission{self, Medium::Radio, encode_message({forged}),
                                         spec_.power, s.now(),
                                         Envelope{MessageKind::OneWayClaim,
                                                  forged.claim.identity}});
  });
}

void AdversaryBehavior::on_signal_start(Simulation& sim, NodeId self, const Reception& r,
                                        const Transmission& tx) {
  if (spec_.strategy != AdversaryStrategy::Overwrite) return;
  if (tx.sender == self || tx.envelope.identity.value != spec_.target_identity) return;
  const MessageKind wanted = cfg_->variant == Variant::OneWay ? MessageKind::OneWayClaim
                                                                  : MessageKind::DataMessage;
  if (tx.envelope.kind != wanted) return;
  if (!attacked_txs_.insert(r.tx_index).second) return;
  launch_overwrite(sim, self, r, tx);
}

void AdversaryBehavior::launch_overwrite(Simulation& sim, NodeId self, const Reception& r,
                                         const Transmission& tx) {
  // Which verifier will consume this frame.
  std::optional<std::size_t> target_verifier;
  if (tx.envelope.kind == MessageKind::OneWayClaim) {
    auto msg = decode_message(MessageKind::OneWayClaim, tx.payload);
    if (!msg) return;
    LocationClaim claim = std::get<OneWayClaimMsg>(*msg).claim;
    claim.identity = tx.envelope.identity;
    target_verifier =
        select_verifier(claim, cfg_->verifiers, static_cast<double>(cfg_->nonce_bits));
  } else {
    target_verifier = hash_target_verifier_;
  }
  if (!target_verifier) {
    sim.record(TraceKind::StateTransition, self,
               {{"event", "overwrite-missed"}, {"why", "no-verifier"}});
    return;
  }
  const Point verifier_pos = cfg_->verifiers[*target_verifier].position;
  const Point victim_pos = sim.node_position(tx.sender);
  const Point own_pos = sim.node_position(self);
  const double c = cfg_->media.radio_speed;

  // Frame timing at the verifier, computed the way the kernel computes it.
  const double vic_start = tx.emit_time + propagation_delay(distance(victim_pos, verifier_pos), c);
  const double duration = transmission_duration(static_cast<double>(tx.payload.size()),
                                                cfg_->media.radio_bandwidth);
  const double vic_end = vic_start + duration;
  const double period = (vic_end - vic_start) / static_cast<double>(tx.payload.size());

  const double own_hop = propagation_delay(distance(own_pos, verifier_pos), c);
  const double earliest_arrival = r.arrival_start + spec_.reaction_time + own_hop;

  const auto n_frame = static_cast<std::ptrdiff_t>(tx.payload.size());
  auto j0 = static_cast<std::ptrdiff_t>(std::ceil((earliest_arrival - vic_start) / period));
  if (j0 < 0) j0 = 0;
  if (j0 >= n_frame) {
    // Frame over before our signal can land: the short-message case.
    sim.record(TraceKind::StateTransition, self,
               {{"event", "overwrite-missed"}, {"why", "frame-too-short"}});
    return;
  }

  // Forged frame aligned with the victim's: same header, our message bytes.
  BitString forged_frame;
  if (tx.envelope.kind == MessageKind::OneWayClaim) {
    auto msg = decode_message(MessageKind::OneWayClaim, tx.payload);
    OneWayClaimMsg f = std::get<OneWayClaimMsg>(*msg);
    f.message = to_bytes(spec_.forged_message);
    forged_frame = encode_message({f});
  } else {
    // Tile the forged text to the victim's length so the splice stays aligned.
    const std::size_t len = tx.payload.size() / 8;
    std::vector<std::uint8_t> body(len);
    const auto pattern = to_bytes(spec_.forged_message);
    for (std::size_t i = 0; i < len; ++i) body[i] = pattern[i % pattern.size()];
    forged_frame = encode_message({DataMsg{body}});
  }
  if (forged_frame.size() != tx.payload.size()) {
    sim.record(TraceKind::StateTransition, self,
               {{"event", "overwrite-missed"}, {"why", "frame-length-mismatch"}});
    return;
  }

  const BitString tail = forged_frame.slice(static_cast<std::size_t>(j0));
  double emit = (vic_start + static_cast<double>(j0) * period) - own_hop;
  const double ready = r.arrival_start + spec_.reaction_time;
  if (emit < ready) emit = ready;  // ceil can shave an ulp

  sim.record(TraceKind::StateTransition, self,
             {{"event", "overwrite-launched"},
              {"identity", spec_.target_identity},
              {"first_bit", j0},
              {"bits", tail.size()}});
  sim.schedule_transmission(Transmission{self, Medium::Radio, tail, spec_.power, emit,
                                         Envelope{tx.envelope.kind, tx.envelope.identity}});
}

void AdversaryBehavior::on_reception(Simulation& sim, NodeId self, const Reception& r,
                                     const Transmission& tx) {
  if (tx.sender == self) return;
  eavesdrop(sim, self, r, tx);

  if (tx.envelope.kind == MessageKind::HashCommand &&
      tx.envelope.identity.value == spec_.target_identity && r.payload_as_received.clean()) {
    // Remember which verifier will open the window; the follow-up message is
    // the thing worth overwriting.
    auto msg = decode_message(MessageKind::HashCommand, r.payload_as_received);
    if (msg) {
      LocationClaim claim = std::get<HashCommandMsg>(*msg).claim;
      claim.identity = tx.envelope.identity;
      hash_target_verifier_ =
          select_verifier(claim, cfg_->verifiers, static_cast<double>(cfg_->nonce_bits));
    }
  }

  if (spec_.strategy != AdversaryStrategy::EavesdropImpersonate) return;

  if (tx.envelope.kind == MessageKind::EchoReply &&
      tx.envelope.identity.value == spec_.target_identity && !impersonation_scheduled_) {
    impersonation_scheduled_ = true;
    if (cfg_->variant == Variant::Echo) {
      schedule_impersonation(sim, self);
    } else {
      schedule_forged_oneway(sim, self);
    }
  }

  if (tx.envelope.kind == MessageKind::AccessRequest && !knowledge_.captured_requests.empty() &&
      !replay_scheduled_ && cfg_->variant == Variant::Echo) {
    replay_scheduled_ = true;
    const WireRequest replay = knowledge_.captured_requests.front();
    sim.schedule(sim.now() + spec_.reaction_time + 0.06, [this, self, replay](Simulation& s) {
      s.record(TraceKind::StateTransition, self,
               {{"event", "replay-request"}, {"identity", replay.identity.value}});
      s.schedule_transmission(Transmission{self, Medium::Radio,
                                           encode_message({AccessRequestMsg{replay}}), 1.0,
                                           s.now(),
                                           Envelope{MessageKind::AccessRequest,
                                                    replay.identity}});
    });
  }

  // Answer the challenge for our own forged one-way claim with the fastest
  // physically-consistent echo; the victim stays silent, its run is over.
  if (tx.envelope.kind == MessageKind::Challenge &&
      tx.envelope.identity.value == spec_.target_identity && forged_claim_pending_) {
    forged_claim_pending_ = false;
    const BitString& heard = r.payload_as_received;
    const double emit =
        floor_reply_emit(r.arrival_start, static_cast<double>(heard.size()), cfg_->media);
    sim.schedule_transmission(Transmission{self, Medium::Ultrasound, heard, 1.0, emit,
                                           Envelope{MessageKind::EchoReply,
                                                    Identity{spec_.target_identity}}});
  }
}

void AdversaryBehavior::eavesdrop(Simulation& sim, NodeId self, const Reception& r,
                                  const Transmission& tx) {
  if (knowledge_.identities.insert(tx.envelope.identity.value).second)
    sim.record(TraceKind::StateTransition, self,
               {{"event", "eavesdrop-learned"}, {"identity", tx.envelope.identity.value}});
  if (tx.envelope.kind == MessageKind::AccessRequest) {
    auto msg = decode_message(MessageKind::AccessRequest, r.payload_as_received);
    if (msg) {
      knowledge_.captured_requests.push_back(std::get<AccessRequestMsg>(*msg).request);
      sim.record(TraceKind::StateTransition, self,
                 {{"event", "captured-request"},
                  {"identity", knowledge_.captured_requests.back().identity.value},
                  {"tagged", knowledge_.captured_requests.back().tag.has_value()}});
    }
  }
}

void AdversaryBehavior::schedule_impersonation(Simulation& sim, NodeId self) {
  // The identity came off the air; the plain transform needs nothing else.
  const Identity id{spec_.target_identity};
  if (!knowledge_.identities.contains(id.value)) return;
  sim.schedule(sim.now() + spec_.reaction_time + 0.05, [this, self, id](Simulation& s) {
    s.record(TraceKind::StateTransition, self,
             {{"event", "impersonate"}, {"identity", id.value}});
    const AccessRequestMsg req{f_plain(id, to_bytes(spec_.forged_message))};
    s.schedule_transmission(Transmission{self, Medium::Radio, encode_message({req}), 1.0,
                                         s.now(),
                                         Envelope{MessageKind::AccessRequest, id}});
  });
}

void AdversaryBehavior::schedule_forged_oneway(Simulation& sim, NodeId self) {
  const ProverSpec* victim = target_spec();
  if (!victim || !knowledge_.identities.contains(spec_.target_identity)) return;
  // Wait out the victim's run, then initiate under its identity. We are not
  // at the claimed location, so the echo round is ours to lose.
  const OneWayClaimMsg forged{
      to_bytes(spec_.forged_message),
      LocationClaim{victim->claimed_location, victim->delta_p, Identity{victim->identity}}};
  sim.schedule(sim.now() + spec_.reaction_time + 1.0, [this, self, forged](Simulation& s) {
    s.record(TraceKind::StateTransition, self,
             {{"event", "forged-oneway-claim"}, {"identity", forged.claim.identity.value}});
    forged_claim_pending_ = true;
    s.schedule_transmission(Transmission{self, Medium::Radio, encode_message({forged}), 1.0,
                                         s.now(),
                                         Envelope{MessageKind::OneWayClaim,
                                                  forged.claim.identity}});
  });
}

}  // namespace echosim
