#pragma once

#include <optional>
#include <span>

#include "echosim/geometry.hpp"
#include "echosim/media.hpp"
#include "echosim/messages.hpp"
#include "echosim/rng.hpp"

namespace echosim {

// A verifier deployment: position v, region-of-acceptance radius R_v, and
// the channel constants it assumes.
struct VerifierConfig {
  Point position;
  double acceptance_radius = 0.0;
  MediaParams media;

  void validate() const {
    media.validate();
    if (!(acceptance_radius > 0))
      throw InvalidParameterError("verifier: acceptance_radius must be > 0");
    if (!is_finite(position)) throw InvalidParameterError("verifier: position must be finite");
  }

  friend bool operator==(const VerifierConfig&, const VerifierConfig&) = default;
};

// Smallest processing budget a prover can declare: challenge airtime plus
// echo airtime, n/b0 + n/bi.
double min_processing_delay(double nonce_bits, const MediaParams& media);

// Signed slack of the region-of-acceptance test. The disk is shrunk by
// delta_p * c*s/(c+s): an accepted run only bounds the prover's distance by
// d(v,l) plus that slack, so shrinking makes acceptance imply d <= R_v.
double roa_slack(const VerifierConfig& cfg, const Point& l, double delta_p);

bool roa_contains(const VerifierConfig& cfg, const Point& l, double delta_p);

// Worst-case honest round trip: d/c + d/s + delta_p.
double round_trip_bound(double d, const MediaParams& media, double delta_p);

// Latest echo arrival_end an honest prover at the claimed location produces,
// replayed with the exact floating-point association of the event kernel:
//   a    = t_s + d/c          (challenge arrival_start at the prover)
//   done = a + delta_p        (prover-side budget, arrival_start to emission-complete)
//   emit = done - n/bi
//   t_f  = (emit + d/s) + n/bi
// Comparing t_f against this value is exact for the honest boundary case;
// no epsilon is involved anywhere.
double echo_deadline(double t_s, double d, double nonce_bits, const MediaParams& media,
                     double delta_p);

// n random bits from the run's seeded generator. Adversary code never holds
// a SeededRng, so unpredictability is structural.
Nonce generate_nonce(SeededRng& rng, std::size_t n_bits);

// First verifier (in configuration order) whose region of acceptance
// contains l and for which the declared delta_p is valid; nullopt = abort.
std::optional<std::size_t> select_verifier(const LocationClaim& claim,
                                           std::span<const VerifierConfig> verifiers,
                                           double nonce_bits);

enum class RejectReason { NonceMismatch, TooSlow, Timeout };

const char* to_string(RejectReason r);

struct LocationVerdict {
  bool accepted = false;
  std::optional<RejectReason> reason;
};

// One verification run at a verifier: the claim under test, the nonce sent,
// timer start/finish, and the echoed bits once they arrive.
struct VerifierSession {
  LocationClaim claim;
  Nonce nonce;
  double timer_start = 0.0;                 // t_s, sampled just before the challenge goes out
  std::optional<double> timer_finish;       // t_f, the echo's arrival_end
  std::optional<BitString> received_nonce;
};

// Verdict over a finished session: nonce comparison first, then the timing
// bound; a session with no echo at all is a timeout.
LocationVerdict verifier_decide(const VerifierSession& session, const VerifierConfig& cfg,
                                double nonce_bits);

// One-way variant of the decision: identical checks, but the payoff is the
// carried message, which is handed on only when both checks pass.
struct OneWayOutcome {
  bool processed = false;
  std::vector<std::uint8_t> message;
  std::optional<RejectReason> reason;
};

OneWayOutcome oneway_decide(const VerifierSession& session, const VerifierConfig& cfg,
                            double nonce_bits, const std::vector<std::uint8_t>& message);

// Emission time of the fastest physically-consistent echo: a streamer that
// re-sends bit k the moment it has arrived. Used by cheating provers.
double floor_reply_emit(double arrival_start, double nonce_bits, const MediaParams& media);

}  // namespace echosim
