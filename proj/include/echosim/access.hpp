#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "echosim/errors.hpp"
#include "echosim/messages.hpp"

namespace echosim {

enum class AccessMode { Plain, SharedKey, PublicKey };

const char* to_string(AccessMode m);

// Opaque key handle. Only the registry mints these; adversary code paths
// never hold one, which is the whole security argument of the oracle model.
struct SecretKey {
  std::uint64_t handle = 0;
};

// Crypto modeled as an unforgeable-tag oracle. A tag can only come into
// existence through make_tag with a handle owned by the identity; verification
// checks the recorded binding (identity, body, challenge). There is no
// cryptanalysis to get wrong and none to rely on.
class KeyRegistry {
 public:
  // Shared-key mode: the verifier's identity -> key table.
  SecretKey register_shared_key(const Identity& id);
  bool has_shared_key(const Identity& id) const;

  // Public-key mode: the identity string itself is the verification key of
  // the pair created here; no prearranged table entry is needed.
  SecretKey create_keypair(const Identity& id);
  bool has_public_key(const Identity& id) const;

  // F(i, k_i, m) with challenge binding. Throws CapabilityError unless the
  // handle was minted for exactly this identity.
  std::uint64_t make_tag(const SecretKey& key, const Identity& id,
                         const std::vector<std::uint8_t>& body, const Nonce& challenge);

  bool verify_tag(std::uint64_t tag, const Identity& id, const std::vector<std::uint8_t>& body,
                  const Nonce& challenge) const;

 private:
  struct Binding {
    std::string identity;
    std::vector<std::uint8_t> body;
    BitString challenge;
  };

  std::uint64_t next_handle_ = 0x1001;
  std::uint64_t next_tag_ = 0x9001;
  std::map<std::uint64_t, std::string> handle_owner_;
  std::set<std::string> shared_table_;
  std::set<std::string> public_keys_;
  std::map<std::uint64_t, Binding> tags_;
};

// F(i, k_i, m) = (i, m): the transform needing no secret, computable by
// anyone who knows the identity.
WireRequest f_plain(const Identity& id, const std::vector<std::uint8_t>& body);

// Keyed transform: (i, m) plus an opaque tag bound to (i, m, challenge).
WireRequest f_keyed(const Identity& id, const SecretKey& key,
                    const std::vector<std::uint8_t>& body, const Nonce& challenge,
                    KeyRegistry& registry);

// Retrievability: the verifier recovers (i, m) from any wire form.
std::pair<Identity, std::vector<std::uint8_t>> parse_request(const WireRequest& req);

struct AccessDecision {
  bool granted = false;
  std::string deny_reason;  // "not-verified" | "bad-tag"
};

// Access-control state at the verifier: which identities have a currently
// valid location verification, and the challenge of the open grant window.
struct AccessState {
  std::map<std::string, double> verified_at;
  std::optional<double> validity;  // seconds; absent = unlimited
  Nonce current_challenge;

  bool is_verified(const Identity& id, double now) const {
    auto it = verified_at.find(id.value);
    if (it == verified_at.end()) return false;
    return !validity || now <= it->second + *validity;
  }
};

// The post-verification grant flow. Plain mode trusts the attached identity
// alone (the vulnerable baseline); the keyed modes additionally require a tag
// that verifies against the registry and the current challenge.
AccessDecision verify_request(const WireRequest& req, AccessMode mode,
                              const KeyRegistry& registry, const AccessState& state, double now);

// The three conditions under which an eavesdropper can impersonate a prover:
// the identity leaks during verification, the wire transform is computable
// without a secret, and the verifier accepts requests at any time after
// verification.
struct ImpersonationConditions {
  bool exposed = false;
  bool computable = false;
  bool accepted_any_time = false;

  bool all() const { return exposed && computable && accepted_any_time; }
};

// Sealed-blob oracle with public-key shape: seal with the private handle,
// open with the identity alone.
class PublicTransformOracle {
 public:
  struct Sealed {
    std::uint64_t blob = 0;

    friend bool operator==(const Sealed&, const Sealed&) = default;
  };

  SecretKey create(const Identity& id);
  Sealed seal(const SecretKey& key, const Identity& id, const std::vector<std::uint8_t>& m);
  std::optional<std::vector<std::uint8_t>> open(const Identity& id, const Sealed& c) const;

 private:
  std::uint64_t next_handle_ = 0x2001;
  std::uint64_t next_blob_ = 0xA001;
  std::map<std::uint64_t, std::string> handle_owner_;
  std::map<std::uint64_t, std::pair<std::string, std::vector<std::uint8_t>>> blobs_;
};

// Same shape with symmetric opening: both directions need the key handle.
class SymmetricTransformOracle {
 public:
  struct Sealed {
    std::uint64_t blob = 0;

    friend bool operator==(const Sealed&, const Sealed&) = default;
  };

  SecretKey create(const Identity& id);
  Sealed seal(const SecretKey& key, const Identity& id, const std::vector<std::uint8_t>& m);
  std::optional<std::vector<std::uint8_t>> open(const SecretKey& key, const Identity& id,
                                                const Sealed& c) const;

 private:
  std::uint64_t next_handle_ = 0x3001;
  std::uint64_t next_blob_ = 0xB001;
  std::map<std::uint64_t, std::string> handle_owner_;
  std::map<std::uint64_t, std::pair<std::string, std::vector<std::uint8_t>>> blobs_;
};

// A transform with the right retrievability profile *is* a cipher: encrypt
// is F under the private pair (i, k_i), decrypt is G under the public
// identity i.
struct PublicKeyCipher {
  std::function<PublicTransformOracle::Sealed(const Identity&, const SecretKey&,
                                              const std::vector<std::uint8_t>&)>
      encrypt;
  std::function<std::optional<std::vector<std::uint8_t>>(const Identity&,
                                                         const PublicTransformOracle::Sealed&)>
      decrypt;
};

PublicKeyCipher build_public_cipher(PublicTransformOracle& oracle);

// Symmetric twin: decrypt needs the same (i, k_i) pair as encrypt.
struct SymmetricCipher {
  std::function<SymmetricTransformOracle::Sealed(const Identity&, const SecretKey&,
                                                 const std::vector<std::uint8_t>&)>
      encrypt;
  std::function<std::optional<std::vector<std::uint8_t>>(
      const Identity&, const SecretKey&, const SymmetricTransformOracle::Sealed&)>
      decrypt;
};

SymmetricCipher build_symmetric_cipher(SymmetricTransformOracle& oracle);

}  // namespace echosim
