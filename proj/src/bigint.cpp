#include "trecdsa/bigint.hpp"

#include <stdexcept>

namespace trecdsa {

Bytes EncodeMpz(const mpz_class& value) {
  if (value < 0) {
    throw std::invalid_argument("cannot encode a negative integer");
  }
  if (value == 0) {
    return {};
  }
  Bytes out((mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
  out.resize(written);
  return out;
}

Bytes EncodeMpzFixed(const mpz_class& value, std::size_t width) {
  const Bytes raw = EncodeMpz(value);
  if (raw.size() > width) {
    throw std::invalid_argument("integer does not fit in fixed width");
  }
  Bytes out(width - raw.size(), 0);
  out.insert(out.end(), raw.begin(), raw.end());
  return out;
}

mpz_class DecodeMpz(ByteView data) {
  mpz_class out;
  if (!data.empty()) {
    mpz_import(out.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  }
  return out;
}

std::size_t BitLength(const mpz_class& value) {
  if (value == 0) return 0;
  return mpz_sizeinbase(value.get_mpz_t(), 2);
}

mpz_class PowMod(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  if (exp < 0) {
    throw std::invalid_argument("PowMod requires a non-negative exponent");
  }
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

mpz_class PowModSigned(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  if (exp >= 0) {
    return PowMod(base, exp, mod);
  }
  return PowMod(InvertMod(base, mod), -exp, mod);
}

mpz_class InvertMod(const mpz_class& value, const mpz_class& mod) {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), value.get_mpz_t(), mod.get_mpz_t()) == 0) {
    throw std::domain_error("value is not invertible");
  }
  return out;
}

mpz_class Mod(const mpz_class& value, const mpz_class& mod) {
  mpz_class out;
  mpz_mod(out.get_mpz_t(), value.get_mpz_t(), mod.get_mpz_t());
  return out;
}

bool IsUnit(const mpz_class& value, const mpz_class& mod) {
  if (value <= 0 || value >= mod) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), value.get_mpz_t(), mod.get_mpz_t());
  return g == 1;
}

}  // namespace trecdsa
