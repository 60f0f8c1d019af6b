#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "trecdsa/bytes.hpp"

namespace trecdsa {

/// Randomness source for every protocol step.
///
/// Output is SHA-256 in counter mode over a 32-byte key. The key comes either
/// from the operating system (production) or from a caller seed, in which
/// case the whole output stream is reproducible. Not thread-safe; give each
/// party its own instance (see Fork).
class Rng {
 public:
  static Rng FromSystem();
  static Rng FromSeed(ByteView seed);
  static Rng FromSeed(std::uint64_t seed);

  Rng(Rng&&) noexcept = default;
  Rng& operator=(Rng&&) noexcept = default;
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;

  void Fill(std::span<std::uint8_t> out);
  Bytes RandomBytes(std::size_t n);
  std::array<std::uint8_t, 32> Random32();

  /// Uniform integer in [0, bound). bound must be positive.
  mpz_class Below(const mpz_class& bound);
  /// Uniform integer in [1, bound) coprime to bound.
  mpz_class UnitBelow(const mpz_class& bound);
  /// Uniform integer with at most `bits` bits.
  mpz_class Bits(std::size_t bits);

  /// Independent child stream. Deterministic when this stream is.
  Rng Fork(std::string_view label);

  bool deterministic() const { return deterministic_; }

 private:
  Rng(const std::array<std::uint8_t, 32>& key, bool deterministic)
      : key_(key), deterministic_(deterministic) {}

  void Refill();

  std::array<std::uint8_t, 32> key_;
  std::array<std::uint8_t, 32> block_{};
  std::size_t block_pos_ = 32;
  std::uint64_t counter_ = 0;
  bool deterministic_;
};

}  // namespace trecdsa
