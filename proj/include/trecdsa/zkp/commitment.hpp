#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>

#include "trecdsa/bytes.hpp"
#include "trecdsa/hash.hpp"
#include "trecdsa/random.hpp"

namespace trecdsa {

// Hash commitment: digest = SHA-256(domain ‖ payload ‖ nonce) with every part
// length-framed and a fresh 32-byte nonce. Binding relies on collision
// resistance, hiding on the nonce.

struct Commitment {
  Digest digest{};

  friend bool operator==(const Commitment&, const Commitment&) = default;
};

struct Decommitment {
  Bytes payload;
  std::array<std::uint8_t, 32> nonce{};

  Bytes Serialize() const;
  static Decommitment Deserialize(ByteView data);
};

std::pair<Commitment, Decommitment> Commit(std::string_view domain, ByteView payload, Rng& rng);

/// The committed payload, or nullopt when the opening does not match.
std::optional<Bytes> VerifyCommitment(std::string_view domain, const Commitment& commitment,
                                      const Decommitment& opening);

}  // namespace trecdsa
