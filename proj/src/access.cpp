#include "echosim/access.hpp"

namespace echosim {

const char* to_string(AccessMode m) {
  switch (m) {
    case AccessMode::Plain: return "plain";
    case AccessMode::SharedKey: return "shared-key";
    case AccessMode::PublicKey: return "public-key";
  }
  return "?";
}

SecretKey KeyRegistry::register_shared_key(const Identity& id) {
  shared_table_.insert(id.value);
  SecretKey key{next_handle_++};
  handle_owner_[key.handle] = id.value;
  return key;
}

bool KeyRegistry::has_shared_key(const Identity& id) const {
  return shared_table_.contains(id.value);
}

SecretKey KeyRegistry::create_keypair(const Identity& id) {
  public_keys_.insert(id.value);
  SecretKey key{next_handle_++};
  handle_owner_[key.handle] = id.value;
  return key;
}

bool KeyRegistry::has_public_key(const Identity& id) const {
  return public_keys_.contains(id.value);
}

std::uint64_t KeyRegistry::make_tag(const SecretKey& key, const Identity& id,
                                    const std::vector<std::uint8_t>& body,
                                    const Nonce& challenge) {
  auto owner = handle_owner_.find(key.handle);
  if (owner == handle_owner_.end() || owner->second != id.value)
    throw CapabilityError("make_tag: caller does not own a key for identity " + id.value);
  const std::uint64_t tag = next_tag_++;
  tags_[tag] = Binding{id.value, body, challenge.bits};
  return tag;
}

bool KeyRegistry::verify_tag(std::uint64_t tag, const Identity& id,
                             const std::vector<std::uint8_t>& body,
                             const Nonce& challenge) const {
  auto it = tags_.find(tag);
  if (it == tags_.end()) return false;
  return it->second.identity == id.value && it->second.body == body &&
         it->second.challenge == challenge.bits;
}

WireRequest f_plain(const Identity& id, const std::vector<std::uint8_t>& body) {
  return WireRequest{id, body, std::nullopt};
}

WireRequest f_keyed(const Identity& id, const SecretKey& key,
                    const std::vector<std::uint8_t>& body, const Nonce& challenge,
                    KeyRegistry& registry) {
  return WireRequest{id, body, registry.make_tag(key, id, body, challenge)};
}

std::pair<Identity, std::vector<std::uint8_t>> parse_request(const WireRequest& req) {
  return {req.identity, req.body};
}

AccessDecision verify_request(const WireRequest& req, AccessMode mode,
                              const KeyRegistry& registry, const AccessState& state,
                              double now) {
  if (!state.is_verified(req.identity, now)) return {false, "not-verified"};
  switch (mode) {
    case AccessMode::Plain:
      // Identity alone decides. This is the baseline flow the impersonation
      // attack exploits.
      return {true, {}};
    case AccessMode::SharedKey:
      if (registry.has_shared_key(req.identity) && req.tag &&
          registry.verify_tag(*req.tag, req.identity, req.body, state.current_challenge))
        return {true, {}};
      return {false, "bad-tag"};
    case AccessMode::PublicKey:
      if (registry.has_public_key(req.identity) && req.tag &&
          registry.verify_tag(*req.tag, req.identity, req.body, state.current_challenge))
        return {true, {}};
      return {false, "bad-tag"};
  }
  return {false, "bad-tag"};
}

SecretKey PublicTransformOracle::create(const Identity& id) {
  SecretKey key{next_handle_++};
  handle_owner_[key.handle] = id.value;
  return key;
}

PublicTransformOracle::Sealed PublicTransformOracle::seal(const SecretKey& key, const Identity& id,
                                                          const std::vector<std::uint8_t>& m) {
  auto owner = handle_owner_.find(key.handle);
  if (owner == handle_owner_.end() || owner->second != id.value)
    throw CapabilityError("seal: caller does not own the private pair for " + id.value);
  const std::uint64_t blob = next_blob_++;
  blobs_[blob] = {id.value, m};
  return Sealed{blob};
}

std::optional<std::vector<std::uint8_t>> PublicTransformOracle::open(const Identity& id,
                                                                     const Sealed& c) const {
  auto it = blobs_.find(c.blob);
  if (it == blobs_.end()) return std::nullopt;       // not a ciphertext
  if (it->second.first != id.value) return std::nullopt;  // wrong public identity
  return it->second.second;
}

SecretKey SymmetricTransformOracle::create(const Identity& id) {
  SecretKey key{next_handle_++};
  handle_owner_[key.handle] = id.value;
  return key;
}

SymmetricTransformOracle::Sealed SymmetricTransformOracle::seal(
    const SecretKey& key, const Identity& id, const std::vector<std::uint8_t>& m) {
  auto owner = handle_owner_.find(key.handle);
  if (owner == handle_owner_.end() || owner->second != id.value)
    throw CapabilityError("seal: caller does not own the key for " + id.value);
  const std::uint64_t blob = next_blob_++;
  blobs_[blob] = {id.value, m};
  return Sealed{blob};
}

std::optional<std::vector<std::uint8_t>> SymmetricTransformOracle::open(const SecretKey& key,
                                                                        const Identity& id,
                                                                        const Sealed& c) const {
  auto owner = handle_owner_.find(key.handle);
  if (owner == handle_owner_.end() || owner->second != id.value)
    throw CapabilityError("open: caller does not own the key for " + id.value);
  auto it = blobs_.find(c.blob);
  if (it == blobs_.end()) return std::nullopt;
  if (it->second.first != id.value) return std::nullopt;
  return it->second.second;
}

PublicKeyCipher build_public_cipher(PublicTransformOracle& oracle) {
  PublicKeyCipher cipher;
  cipher.encrypt = [&oracle](const Identity& id, const SecretKey& key,
                             const std::vector<std::uint8_t>& m) {
    return oracle.seal(key, id, m);
  };
  cipher.decrypt = [&oracle](const Identity& id, const PublicTransformOracle::Sealed& c) {
    return oracle.open(id, c);
  };
  return cipher;
}

SymmetricCipher build_symmetric_cipher(SymmetricTransformOracle& oracle) {
  SymmetricCipher cipher;
  cipher.encrypt = [&oracle](const Identity& id, const SecretKey& key,
                             const std::vector<std::uint8_t>& m) {
    return oracle.seal(key, id, m);
  };
  cipher.decrypt = [&oracle](const Identity& id, const SecretKey& key,
                             const SymmetricTransformOracle::Sealed& c) {
    return oracle.open(key, id, c);
  };
  return cipher;
}

}  // namespace echosim
