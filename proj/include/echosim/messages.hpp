#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "echosim/bits.hpp"
#include "echosim/errors.hpp"
#include "echosim/geometry.hpp"

namespace echosim {

// Opaque byte-string naming a prover; unique and stable for its lifetime.
struct Identity {
  std::string value;

  bool valid() const { return !value.empty(); }
  friend bool operator==(const Identity&, const Identity&) = default;
  friend auto operator<=>(const Identity&, const Identity&) = default;
};

// Random challenge bit string of the configured length n.
struct Nonce {
  BitString bits;

  friend bool operator==(const Nonce&, const Nonce&) = default;
};

// What a prover asserts when it initiates verification: where it claims to
// be (l) and its declared processing budget (delta_p).
struct LocationClaim {
  Point claimed_location;
  double processing_delay = 0.0;
  Identity identity;

  bool valid() const {
    return identity.valid() && is_finite(claimed_location) && processing_delay >= 0.0;
  }
  friend bool operator==(const LocationClaim&, const LocationClaim&) = default;
};

enum class MessageKind : std::uint8_t {
  Claim,            // verification request: (l, delta_p)
  Challenge,        // verifier nonce, radio
  EchoReply,        // echoed nonce bits, ultrasound
  OneWayClaim,      // (m, l, delta_p)
  HashCommand,      // (digest, l, delta_p): accept a later message with this hash
  DataMessage,      // follow-up long message for the hash flow
  AccessRequest,    // wire form of F(i, k_i, m)
  AccessChallenge,  // fresh nonce for the access grant window
  Grant,
  Deny,
};

const char* to_string(MessageKind k);

// Frame envelope: the message kind and the identity the message concerns.
// Rides with every transmission at zero airtime; only the content bits below
// occupy the channel and are subject to capture.
struct Envelope {
  MessageKind kind = MessageKind::Claim;
  Identity identity;
};

struct ClaimMsg {
  LocationClaim claim;
};

struct ChallengeMsg {
  Nonce nonce;
};

struct EchoReplyMsg {
  BitString echoed;  // may carry garble markers; an honest prover cannot detect them
};

struct OneWayClaimMsg {
  std::vector<std::uint8_t> message;
  LocationClaim claim;
};

struct HashCommandMsg {
  std::uint64_t digest = 0;
  LocationClaim claim;
};

struct DataMsg {
  std::vector<std::uint8_t> payload;
};

// Output shape of the message transform F(i, k_i, m). The verifier can always
// retrieve i and m from it; the tag, when present, is an opaque handle minted
// by the key registry and meaningless without it.
struct WireRequest {
  Identity identity;
  std::vector<std::uint8_t> body;
  std::optional<std::uint64_t> tag;

  friend bool operator==(const WireRequest&, const WireRequest&) = default;
};

struct AccessRequestMsg {
  WireRequest request;
};

struct AccessChallengeMsg {
  Nonce nonce;
};

struct GrantMsg {};

struct DenyMsg {};

using ProtocolMessage = std::variant<ClaimMsg, ChallengeMsg, EchoReplyMsg, OneWayClaimMsg,
                                     HashCommandMsg, DataMsg, AccessRequestMsg,
                                     AccessChallengeMsg, GrantMsg, DenyMsg>;

MessageKind kind_of(const ProtocolMessage& msg);

// Content bits that occupy airtime for this message.
BitString encode_message(const ProtocolMessage& msg);

// Reconstructs a message from (possibly capture-mangled) content bits.
// Returns nullopt when the frame cannot be parsed: wrong length, garbled
// numeric fields, or non-finite claim values.
std::optional<ProtocolMessage> decode_message(MessageKind kind, const BitString& content);

}  // namespace echosim
