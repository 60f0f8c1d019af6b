#include "trecdsa/paillier.hpp"

#include <stdexcept>

#include "trecdsa/bigint.hpp"
#include "trecdsa/kernels.hpp"

namespace trecdsa {
namespace {

constexpr std::uint16_t kTagN = 1;
constexpr std::uint16_t kTagGamma = 2;
constexpr std::uint16_t kTagP = 3;
constexpr std::uint16_t kTagQ = 4;

mpz_class Lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

}  // namespace

mpz_class PaillierL(const mpz_class& x, const mpz_class& n) {
  const mpz_class t = x - 1;
  if (!mpz_divisible_p(t.get_mpz_t(), n.get_mpz_t())) {
    throw std::invalid_argument("L(x): N does not divide x - 1");
  }
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
  return out;
}

PaillierPublicKey::PaillierPublicKey(mpz_class n, mpz_class gamma)
    : n_(std::move(n)), n_squared_(n_ * n_), gamma_(std::move(gamma)) {
  if (n_ < 15 || mpz_even_p(n_.get_mpz_t())) {
    throw std::invalid_argument("Paillier modulus must be an odd composite");
  }
  if (!IsUnit(gamma_, n_squared_)) {
    throw std::invalid_argument("Paillier generator must be a unit mod N^2");
  }
  gamma_is_n_plus_one_ = gamma_ == n_ + 1;
}

std::size_t PaillierPublicKey::bits() const { return BitLength(n_); }

mpz_class PaillierPublicKey::PowGamma(const mpz_class& m) const {
  if (gamma_is_n_plus_one_) {
    // (1 + N)^m = 1 + mN mod N^2
    return Mod(1 + Mod(m, n_) * n_, n_squared_);
  }
  return PowModSigned(gamma_, m, n_squared_);
}

PaillierCiphertext PaillierPublicKey::Encrypt(const mpz_class& m, const mpz_class& r) const {
  if (m < 0 || m >= n_) {
    throw std::out_of_range("Paillier plaintext must be in [0, N)");
  }
  if (!IsUnit(r, n_)) {
    throw std::invalid_argument("Paillier randomness must be a unit mod N");
  }
  return PaillierCiphertext{Mod(PowGamma(m) * PowMod(r, n_, n_squared_), n_squared_)};
}

PaillierCiphertext PaillierPublicKey::Encrypt(const mpz_class& m, Rng& rng,
                                              mpz_class* r_out) const {
  mpz_class r = rng.UnitBelow(n_);
  PaillierCiphertext c = Encrypt(m, r);
  if (r_out != nullptr) {
    *r_out = std::move(r);
  }
  return c;
}

PaillierCiphertext PaillierPublicKey::Add(const PaillierCiphertext& a,
                                          const PaillierCiphertext& b) const {
  return PaillierCiphertext{Mod(a.value * b.value, n_squared_)};
}

PaillierCiphertext PaillierPublicKey::ScalarMul(const mpz_class& a,
                                                const PaillierCiphertext& c) const {
  if (a < 0 || a >= n_) {
    throw std::out_of_range("Paillier scalar must be in [0, N)");
  }
  return PaillierCiphertext{PowMod(c.value, a, n_squared_)};
}

bool PaillierPublicKey::IsValidCiphertext(const PaillierCiphertext& c) const {
  if (c.value <= 0 || c.value >= n_squared_) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), c.value.get_mpz_t(), n_.get_mpz_t());
  return g == 1;
}

Bytes PaillierPublicKey::Serialize() const {
  TlvWriter w;
  w.Put(kTagN, EncodeMpz(n_)).Put(kTagGamma, EncodeMpz(gamma_));
  return w.Take();
}

PaillierPublicKey PaillierPublicKey::Deserialize(ByteView data) {
  TlvReader r(data);
  mpz_class n = DecodeMpz(r.Get(kTagN));
  mpz_class gamma = DecodeMpz(r.Get(kTagGamma));
  r.ExpectEnd();
  try {
    return PaillierPublicKey(std::move(n), std::move(gamma));
  } catch (const std::invalid_argument& e) {
    throw DecodeError(e.what());
  }
}

bool IsAdmissiblePrimePair(const mpz_class& p, const mpz_class& q) {
  if (p == q || p < 3 || q < 3) return false;
  mpz_class g;
  const mpz_class n = p * q;
  const mpz_class phi = (p - 1) * (q - 1);
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
  return g == 1;
}

PaillierSecretKey::PaillierSecretKey(mpz_class p, mpz_class q, mpz_class gamma)
    : p_(std::move(p)), q_(std::move(q)) {
  if (!IsAdmissiblePrimePair(p_, q_)) {
    throw std::invalid_argument("gcd(pq, (p-1)(q-1)) != 1");
  }
  const mpz_class n = p_ * q_;
  public_key_ = PaillierPublicKey(n, std::move(gamma));
  lambda_ = Lcm(p_ - 1, q_ - 1);
  const mpz_class u = PowMod(public_key_.gamma(), lambda_, public_key_.n_squared());
  try {
    mu_ = InvertMod(PaillierL(u, n), n);
  } catch (const std::exception&) {
    throw std::invalid_argument("order of gamma is not divisible by N");
  }
}

mpz_class PaillierSecretKey::Decrypt(const PaillierCiphertext& c) const {
  if (!public_key_.IsValidCiphertext(c)) {
    throw std::invalid_argument("ciphertext is not a unit mod N^2");
  }
  const mpz_class& n = public_key_.n();
  const mpz_class u = PowMod(c.value, lambda_, public_key_.n_squared());
  return Mod(PaillierL(u, n) * mu_, n);
}

Bytes PaillierSecretKey::SerializeSecret() const {
  TlvWriter w;
  w.Put(kTagP, EncodeMpz(p_)).Put(kTagQ, EncodeMpz(q_)).Put(kTagGamma,
                                                           EncodeMpz(public_key_.gamma()));
  return w.Take();
}

PaillierSecretKey PaillierSecretKey::DeserializeSecret(ByteView data) {
  TlvReader r(data);
  mpz_class p = DecodeMpz(r.Get(kTagP));
  mpz_class q = DecodeMpz(r.Get(kTagQ));
  mpz_class gamma = DecodeMpz(r.Get(kTagGamma));
  r.ExpectEnd();
  try {
    return PaillierSecretKey(std::move(p), std::move(q), std::move(gamma));
  } catch (const std::invalid_argument& e) {
    throw DecodeError(e.what());
  }
}

PaillierSecretKey GeneratePaillierKey(std::size_t bits, Rng& rng, PaillierGenerator generator) {
  if (bits < 64 || bits % 2 != 0) {
    throw std::invalid_argument("Paillier modulus size must be even and >= 64 bits");
  }
  while (true) {
    mpz_class p = kernels::GeneratePrime(bits / 2, kernels::PrimeKind::kPrime, rng);
    mpz_class q = kernels::GeneratePrime(bits / 2, kernels::PrimeKind::kPrime, rng);
    if (!IsAdmissiblePrimePair(p, q)) {
      continue;
    }
    const mpz_class n = p * q;
    if (generator == PaillierGenerator::kNPlusOne) {
      return PaillierSecretKey(p, q, n + 1);
    }
    // A random gamma whose order is not a multiple of N shows up as a
    // non-invertible L(gamma^lambda); draw again in that case.
    for (int attempt = 0; attempt < 64; ++attempt) {
      try {
        return PaillierSecretKey(p, q, rng.UnitBelow(n * n));
      } catch (const std::invalid_argument&) {
      }
    }
  }
}

}  // namespace trecdsa
