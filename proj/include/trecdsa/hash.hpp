#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string_view>

#include "trecdsa/bytes.hpp"

namespace trecdsa {

enum class HashId : std::uint8_t {
  kSha256 = 1,
  kSha3_256 = 2,
};

using Digest = std::array<std::uint8_t, 32>;

Digest Sha256(ByteView data);
Digest HashWith(HashId id, ByteView data);
std::string_view HashName(HashId id);
HashId HashIdFromName(std::string_view name);

/// Length-prefixed absorb-then-squeeze hashing for Fiat-Shamir challenges and
/// key derivation. Every absorbed item is framed as label ‖ len ‖ data so that
/// distinct sequences never collide by concatenation.
class Transcript {
 public:
  explicit Transcript(std::string_view domain);

  Transcript& Append(std::string_view label, ByteView data);
  Transcript& AppendMpz(std::string_view label, const mpz_class& value);
  Transcript& AppendU32(std::string_view label, std::uint32_t value);

  /// SHA-256 over everything absorbed so far.
  Digest Finish() const;
  /// `count` bytes of output (SHA-256 in counter mode over Finish()).
  Bytes Expand(std::size_t count) const;
  /// Integer in [0, bound), derived with 128 extra bits so the bias is
  /// negligible.
  mpz_class ChallengeBelow(const mpz_class& bound) const;

 private:
  Bytes buffer_;
};

}  // namespace trecdsa
