#pragma once

#include <gmpxx.h>

#include <cstddef>

#include "trecdsa/bytes.hpp"
#include "trecdsa/random.hpp"

namespace trecdsa {

struct PaillierCiphertext {
  mpz_class value;

  friend bool operator==(const PaillierCiphertext&, const PaillierCiphertext&) = default;
};

class PaillierPublicKey {
 public:
  PaillierPublicKey() = default;
  /// Validates that N is odd and gamma is a unit mod N^2.
  PaillierPublicKey(mpz_class n, mpz_class gamma);

  const mpz_class& n() const { return n_; }
  const mpz_class& n_squared() const { return n_squared_; }
  const mpz_class& gamma() const { return gamma_; }
  std::size_t bits() const;

  /// gamma^m mod N^2 for any integer m; uses 1 + mN when gamma = N + 1.
  mpz_class PowGamma(const mpz_class& m) const;

  /// c = gamma^m r^N mod N^2. Requires 0 <= m < N and r a unit mod N.
  PaillierCiphertext Encrypt(const mpz_class& m, const mpz_class& r) const;
  /// Fresh randomness; returns r through `r_out` when non-null.
  PaillierCiphertext Encrypt(const mpz_class& m, Rng& rng, mpz_class* r_out = nullptr) const;

  PaillierCiphertext Add(const PaillierCiphertext& a, const PaillierCiphertext& b) const;
  /// Requires 0 <= a < N.
  PaillierCiphertext ScalarMul(const mpz_class& a, const PaillierCiphertext& c) const;

  /// True iff 0 < c < N^2 and gcd(c, N) = 1.
  bool IsValidCiphertext(const PaillierCiphertext& c) const;

  Bytes Serialize() const;
  static PaillierPublicKey Deserialize(ByteView data);

  friend bool operator==(const PaillierPublicKey& a, const PaillierPublicKey& b) {
    return a.n_ == b.n_ && a.gamma_ == b.gamma_;
  }

 private:
  mpz_class n_;
  mpz_class n_squared_;
  mpz_class gamma_;
  bool gamma_is_n_plus_one_ = false;
};

class PaillierSecretKey {
 public:
  PaillierSecretKey() = default;
  /// Derives lambda and mu. Throws std::invalid_argument when p, q do not form
  /// an admissible pair or when gamma does not have order divisible by N.
  PaillierSecretKey(mpz_class p, mpz_class q, mpz_class gamma);

  const PaillierPublicKey& public_key() const { return public_key_; }
  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }
  const mpz_class& lambda() const { return lambda_; }
  const mpz_class& mu() const { return mu_; }
  /// Euler's totient of N.
  mpz_class Phi() const { return (p_ - 1) * (q_ - 1); }

  /// m = L(c^lambda mod N^2) * mu mod N. Throws std::invalid_argument when c
  /// is not a valid ciphertext.
  mpz_class Decrypt(const PaillierCiphertext& c) const;

  Bytes SerializeSecret() const;
  static PaillierSecretKey DeserializeSecret(ByteView data);

 private:
  PaillierPublicKey public_key_;
  mpz_class p_;
  mpz_class q_;
  mpz_class lambda_;
  mpz_class mu_;
};

enum class PaillierGenerator {
  /// gamma = N + 1.
  kNPlusOne,
  /// gamma uniform in Z*_{N^2}, retried until mu exists.
  kRandom,
};

/// gcd(pq, (p-1)(q-1)) = 1 and p != q.
bool IsAdmissiblePrimePair(const mpz_class& p, const mpz_class& q);

/// Fresh key with an N of exactly `bits` bits. Sizes below 1024 bits are only
/// for tests and are insecure.
PaillierSecretKey GeneratePaillierKey(std::size_t bits, Rng& rng,
                                      PaillierGenerator generator = PaillierGenerator::kNPlusOne);

/// L(x) = (x - 1) / N, asserting N | (x - 1).
mpz_class PaillierL(const mpz_class& x, const mpz_class& n);

}  // namespace trecdsa
