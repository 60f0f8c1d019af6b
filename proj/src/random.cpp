#include "trecdsa/random.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <stdexcept>

#include "trecdsa/bigint.hpp"
#include "trecdsa/hash.hpp"

namespace trecdsa {

Rng Rng::FromSystem() {
  std::array<std::uint8_t, 32> key{};
  if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1) {
    throw std::runtime_error("system randomness unavailable");
  }
  return Rng(key, false);
}

Rng Rng::FromSeed(ByteView seed) {
  Bytes framed = {'t', 'r', 'e', 'c', 'd', 's', 'a', '/', 'r', 'n', 'g'};
  AppendBytes(seed, &framed);
  return Rng(Sha256(framed), true);
}

Rng Rng::FromSeed(std::uint64_t seed) {
  Bytes b;
  AppendU32Be(static_cast<std::uint32_t>(seed >> 32), &b);
  AppendU32Be(static_cast<std::uint32_t>(seed & 0xFFFFFFFFu), &b);
  return FromSeed(b);
}

void Rng::Refill() {
  Bytes input(key_.begin(), key_.end());
  AppendU32Be(static_cast<std::uint32_t>(counter_ >> 32), &input);
  AppendU32Be(static_cast<std::uint32_t>(counter_ & 0xFFFFFFFFu), &input);
  ++counter_;
  block_ = Sha256(input);
  block_pos_ = 0;
}

void Rng::Fill(std::span<std::uint8_t> out) {
  std::size_t written = 0;
  while (written < out.size()) {
    if (block_pos_ == block_.size()) {
      Refill();
    }
    const std::size_t take = std::min(out.size() - written, block_.size() - block_pos_);
    std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(block_pos_), take,
                out.begin() + static_cast<std::ptrdiff_t>(written));
    block_pos_ += take;
    written += take;
  }
}

Bytes Rng::RandomBytes(std::size_t n) {
  Bytes out(n);
  Fill(out);
  return out;
}

std::array<std::uint8_t, 32> Rng::Random32() {
  std::array<std::uint8_t, 32> out{};
  Fill(out);
  return out;
}

mpz_class Rng::Bits(std::size_t bits) {
  if (bits == 0) return 0;
  Bytes raw((bits + 7) / 8);
  Fill(raw);
  const std::size_t excess = raw.size() * 8 - bits;
  raw[0] &= static_cast<std::uint8_t>(0xFF >> excess);
  return DecodeMpz(raw);
}

mpz_class Rng::Below(const mpz_class& bound) {
  if (bound <= 0) {
    throw std::invalid_argument("Rng::Below requires a positive bound");
  }
  const std::size_t bits = BitLength(bound);
  while (true) {
    mpz_class candidate = Bits(bits);
    if (candidate < bound) {
      return candidate;
    }
  }
}

mpz_class Rng::UnitBelow(const mpz_class& bound) {
  if (bound <= 1) {
    throw std::invalid_argument("Rng::UnitBelow requires bound > 1");
  }
  while (true) {
    mpz_class candidate = Below(bound);
    if (IsUnit(candidate, bound)) {
      return candidate;
    }
  }
}

Rng Rng::Fork(std::string_view label) {
  const auto child_key = Random32();
  Bytes framed(child_key.begin(), child_key.end());
  AppendBytes(AsBytes(label), &framed);
  return Rng(Sha256(framed), deterministic_);
}

}  // namespace trecdsa
