#include "echosim/protocol.hpp"

#include <algorithm>

namespace echosim {

double min_processing_delay(double nonce_bits, const MediaParams& media) {
  return nonce_bits / media.radio_bandwidth + nonce_bits / media.sound_bandwidth;
}

double roa_slack(const VerifierConfig& cfg, const Point& l, double delta_p) {
  const double c = cfg.media.radio_speed;
  const double s = cfg.media.sound_speed;
  const double kappa = (c * s) / (c + s);
  return cfg.acceptance_radius - (distance(cfg.position, l) + delta_p * kappa);
}

bool roa_contains(const VerifierConfig& cfg, const Point& l, double delta_p) {
  return roa_slack(cfg, l, delta_p) >= 0.0;
}

double round_trip_bound(double d, const MediaParams& media, double delta_p) {
  return d / media.radio_speed + d / media.sound_speed + delta_p;
}

double echo_deadline(double t_s, double d, double nonce_bits, const MediaParams& media,
                     double delta_p) {
  const double reply_duration = transmission_duration(nonce_bits, media.sound_bandwidth);
  const double a = t_s + propagation_delay(d, media.radio_speed);
  const double done = a + delta_p;
  const double emit = done - reply_duration;
  return (emit + propagation_delay(d, media.sound_speed)) + reply_duration;
}

Nonce generate_nonce(SeededRng& rng, std::size_t n_bits) {
  if (n_bits == 0) throw InvalidParameterError("generate_nonce: n must be >= 1");
  return Nonce{rng.bits(n_bits)};
}

std::optional<std::size_t> select_verifier(const LocationClaim& claim,
                                           std::span<const VerifierConfig> verifiers,
                                           double nonce_bits) {
  for (std::size_t i = 0; i < verifiers.size(); ++i) {
    if (!roa_contains(verifiers[i], claim.claimed_location, claim.processing_delay)) continue;
    if (claim.processing_delay < min_processing_delay(nonce_bits, verifiers[i].media)) continue;
    return i;
  }
  return std::nullopt;
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::NonceMismatch: return "nonce-mismatch";
    case RejectReason::TooSlow: return "too-slow";
    case RejectReason::Timeout: return "timeout";
  }
  return "?";
}

LocationVerdict verifier_decide(const VerifierSession& session, const VerifierConfig& cfg,
                                double nonce_bits) {
  if (!session.timer_finish || !session.received_nonce)
    return {false, RejectReason::Timeout};
  if (*session.received_nonce != session.nonce.bits)
    return {false, RejectReason::NonceMismatch};
  const double d = distance(cfg.position, session.claim.claimed_location);
  const double deadline =
      echo_deadline(session.timer_start, d, nonce_bits, cfg.media, session.claim.processing_delay);
  if (*session.timer_finish > deadline) return {false, RejectReason::TooSlow};
  return {true, std::nullopt};
}

OneWayOutcome oneway_decide(const VerifierSession& session, const VerifierConfig& cfg,
                            double nonce_bits, const std::vector<std::uint8_t>& message) {
  const LocationVerdict v = verifier_decide(session, cfg, nonce_bits);
  if (!v.accepted) return {false, {}, v.reason};
  return {true, message, std::nullopt};
}

double floor_reply_emit(double arrival_start, double nonce_bits, const MediaParams& media) {
  // Bit k of the challenge is available at arrival_start + k/b0 and must not
  // air before then; the binding constraint is either the first or the last
  // bit of the echo.
  const double first = 1.0 / media.radio_bandwidth;
  const double last =
      nonce_bits / media.radio_bandwidth - (nonce_bits - 1.0) / media.sound_bandwidth;
  return arrival_start + std::max(first, last);
}

}  // namespace echosim
