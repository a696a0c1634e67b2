#include "echosim/messages.hpp"

#include <bit>
#include <cmath>

namespace echosim {

namespace {

class BitWriter {
 public:
  void push_bit(std::uint8_t b) { out_.bits.push_back(b); }

  void push_uint(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) push_bit(static_cast<std::uint8_t>((v >> i) & 1u));
  }

  void push_double(double d) { push_uint(std::bit_cast<std::uint64_t>(d), 64); }

  void push_bytes(const std::vector<std::uint8_t>& bytes) {
    for (std::uint8_t b : bytes) push_uint(b, 8);
  }

  void push_raw(const BitString& bs) { out_.append(bs); }

  BitString take() { return std::move(out_); }

 private:
  BitString out_;
};

class BitReader {
 public:
  explicit BitReader(const BitString& bs) : bs_(bs) {}

  bool read_uint(std::uint64_t& v, int width) {
    if (pos_ + static_cast<std::size_t>(width) > bs_.size()) return false;
    v = 0;
    for (int i = 0; i < width; ++i) {
      std::uint8_t b = bs_.bits[pos_++];
      if (b == kGarbleBit) return false;
      v = (v << 1) | b;
    }
    return true;
  }

  bool read_double(double& d) {
    std::uint64_t raw = 0;
    if (!read_uint(raw, 64)) return false;
    d = std::bit_cast<double>(raw);
    return true;
  }

  // All remaining bits as bytes; fails on garble or non-byte-multiple length.
  bool read_rest_bytes(std::vector<std::uint8_t>& out) {
    BitString rest = bs_.slice(pos_);
    pos_ = bs_.size();
    auto bytes = rest.to_bytes();
    if (!bytes) return false;
    out = std::move(*bytes);
    return true;
  }

  std::size_t remaining() const { return bs_.size() - pos_; }

 private:
  const BitString& bs_;
  std::size_t pos_ = 0;
};

void push_claim_fields(BitWriter& w, const LocationClaim& claim) {
  w.push_double(claim.claimed_location.x);
  w.push_double(claim.claimed_location.y);
  w.push_double(claim.processing_delay);
}

bool read_claim_fields(BitReader& r, LocationClaim& claim) {
  if (!r.read_double(claim.claimed_location.x)) return false;
  if (!r.read_double(claim.claimed_location.y)) return false;
  if (!r.read_double(claim.processing_delay)) return false;
  return is_finite(claim.claimed_location) && std::isfinite(claim.processing_delay) &&
         claim.processing_delay >= 0.0;
}

}  // namespace

const char* to_string(MessageKind k) {
  switch (k) {
    case MessageKind::Claim: return "claim";
    case MessageKind::Challenge: return "challenge";
    case MessageKind::EchoReply: return "echo-reply";
    case MessageKind::OneWayClaim: return "oneway-claim";
    case MessageKind::HashCommand: return "hash-command";
    case MessageKind::DataMessage: return "data";
    case MessageKind::AccessRequest: return "access-request";
    case MessageKind::AccessChallenge: return "access-challenge";
    case MessageKind::Grant: return "grant";
    case MessageKind::Deny: return "deny";
  }
  return "?";
}

MessageKind kind_of(const ProtocolMessage& msg) {
  struct Visitor {
    MessageKind operator()(const ClaimMsg&) const { return MessageKind::Claim; }
    MessageKind operator()(const ChallengeMsg&) const { return MessageKind::Challenge; }
    MessageKind operator()(const EchoReplyMsg&) const { return MessageKind::EchoReply; }
    MessageKind operator()(const OneWayClaimMsg&) const { return MessageKind::OneWayClaim; }
    MessageKind operator()(const HashCommandMsg&) const { return MessageKind::HashCommand; }
    MessageKind operator()(const DataMsg&) const { return MessageKind::DataMessage; }
    MessageKind operator()(const AccessRequestMsg&) const { return MessageKind::AccessRequest; }
    MessageKind operator()(const AccessChallengeMsg&) const { return MessageKind::AccessChallenge; }
    MessageKind operator()(const GrantMsg&) const { return MessageKind::Grant; }
    MessageKind operator()(const DenyMsg&) const { return MessageKind::Deny; }
  };
  return std::visit(Visitor{}, msg);
}

BitString encode_message(const ProtocolMessage& msg) {
  BitWriter w;
  switch (kind_of(msg)) {
    case MessageKind::Claim:
      push_claim_fields(w, std::get<ClaimMsg>(msg).claim);
      break;
    case MessageKind::Challenge:
      w.push_raw(std::get<ChallengeMsg>(msg).nonce.bits);
      break;
    case MessageKind::EchoReply:
      w.push_raw(std::get<EchoReplyMsg>(msg).echoed);
      break;
    case MessageKind::OneWayClaim: {
      const auto& m = std::get<OneWayClaimMsg>(msg);
      push_claim_fields(w, m.claim);
      w.push_bytes(m.message);
      break;
    }
    case MessageKind::HashCommand: {
      const auto& m = std::get<HashCommandMsg>(msg);
      push_claim_fields(w, m.claim);
      w.push_uint(m.digest, 64);
      break;
    }
    case MessageKind::DataMessage:
      w.push_bytes(std::get<DataMsg>(msg).payload);
      break;
    case MessageKind::AccessRequest: {
      const auto& req = std::get<AccessRequestMsg>(msg).request;
      w.push_uint(req.identity.value.size(), 16);
      w.push_bytes(std::vector<std::uint8_t>(req.identity.value.begin(), req.identity.value.end()));
      w.push_uint(req.tag ? 1 : 0, 8);
      if (req.tag) w.push_uint(*req.tag, 64);
      w.push_bytes(req.body);
      break;
    }
    case MessageKind::AccessChallenge:
      w.push_raw(std::get<AccessChallengeMsg>(msg).nonce.bits);
      break;
    case MessageKind::Grant:
      w.push_uint(1, 8);
      break;
    case MessageKind::Deny:
      w.push_uint(0, 8);
      break;
  }
  return w.take();
}

std::optional<ProtocolMessage> decode_message(MessageKind kind, const BitString& content) {
  if (content.empty()) return std::nullopt;
  BitReader r(content);
  switch (kind) {
    case MessageKind::Claim: {
      LocationClaim claim;
      if (!read_claim_fields(r, claim) || r.remaining() != 0) return std::nullopt;
      return ProtocolMessage{ClaimMsg{claim}};
    }
    case MessageKind::Challenge:
      // Raw nonce bits; garble is legal here and is echoed by honest provers.
      return ProtocolMessage{ChallengeMsg{Nonce{content}}};
    case MessageKind::EchoReply:
      return ProtocolMessage{EchoReplyMsg{content}};
    case MessageKind::OneWayClaim: {
      OneWayClaimMsg m;
      if (!read_claim_fields(r, m.claim)) return std::nullopt;
      if (!r.read_rest_bytes(m.message) || m.message.empty()) return std::nullopt;
      return ProtocolMessage{m};
    }
    case MessageKind::HashCommand: {
      HashCommandMsg m;
      if (!read_claim_fields(r, m.claim)) return std::nullopt;
      if (!r.read_uint(m.digest, 64) || r.remaining() != 0) return std::nullopt;
      return ProtocolMessage{m};
    }
    case MessageKind::DataMessage: {
      DataMsg m;
      if (!r.read_rest_bytes(m.payload) || m.payload.empty()) return std::nullopt;
      return ProtocolMessage{m};
    }
    case MessageKind::AccessRequest: {
      std::uint64_t id_len = 0;
      if (!r.read_uint(id_len, 16)) return std::nullopt;
      std::string id;
      for (std::uint64_t i = 0; i < id_len; ++i) {
        std::uint64_t c = 0;
        if (!r.read_uint(c, 8)) return std::nullopt;
        id.push_back(static_cast<char>(c));
      }
      std::uint64_t has_tag = 0;
      if (!r.read_uint(has_tag, 8) || has_tag > 1) return std::nullopt;
      WireRequest req;
      req.identity = Identity{id};
      if (has_tag == 1) {
        std::uint64_t tag = 0;
        if (!r.read_uint(tag, 64)) return std::nullopt;
        req.tag = tag;
      }
      if (!r.read_rest_bytes(req.body)) return std::nullopt;
      if (!req.identity.valid()) return std::nullopt;
      return ProtocolMessage{AccessRequestMsg{req}};
    }
    case MessageKind::AccessChallenge:
      return ProtocolMessage{AccessChallengeMsg{Nonce{content}}};
    case MessageKind::Grant: {
      std::uint64_t code = 0;
      if (!r.read_uint(code, 8) || code != 1 || r.remaining() != 0) return std::nullopt;
      return ProtocolMessage{GrantMsg{}};
    }
    case MessageKind::Deny: {
      std::uint64_t code = 0;
      if (!r.read_uint(code, 8) || code != 0 || r.remaining() != 0) return std::nullopt;
      return ProtocolMessage{DenyMsg{}};
    }
  }
  return std::nullopt;
}

}  // namespace echosim
