#pragma once

#include <gmpxx.h>

#include <cstddef>

#include "trecdsa/bytes.hpp"

namespace trecdsa {

/// Minimal big-endian magnitude; zero encodes as the empty string.
Bytes EncodeMpz(const mpz_class& value);
/// Left-padded to exactly `width` bytes. Throws if the value does not fit.
Bytes EncodeMpzFixed(const mpz_class& value, std::size_t width);
mpz_class DecodeMpz(ByteView data);

std::size_t BitLength(const mpz_class& value);

mpz_class PowMod(const mpz_class& base, const mpz_class& exp, const mpz_class& mod);
/// Exponent may be negative; the base must then be invertible.
mpz_class PowModSigned(const mpz_class& base, const mpz_class& exp, const mpz_class& mod);
/// Throws std::domain_error when no inverse exists.
mpz_class InvertMod(const mpz_class& value, const mpz_class& mod);
/// Non-negative remainder.
mpz_class Mod(const mpz_class& value, const mpz_class& mod);
bool IsUnit(const mpz_class& value, const mpz_class& mod);

}  // namespace trecdsa
