#pragma once

// Range proofs for the multiplicative-to-additive share conversion. Both are
// made non-interactive with a challenge e in Z_q derived from the statement
// and the prover's first message. Commitments live in the verifier's
// auxiliary RSA group (M, h1, h2), where M is a product of two safe primes
// and h2 = h1^alpha for an alpha the verifier discarded.

#include <gmpxx.h>

#include <optional>

#include "trecdsa/algebra.hpp"
#include "trecdsa/paillier.hpp"

namespace trecdsa {

struct AuxRsaParams {
  mpz_class m;
  mpz_class h1;
  mpz_class h2;

  /// Odd M of at least 256 bits, h1 and h2 units mod M outside {0, 1, M-1}.
  bool IsWellFormed() const;
  std::size_t bits() const;
  Bytes Serialize() const;
  /// Rejects values that are not well formed.
  static AuxRsaParams Deserialize(ByteView data);

  friend bool operator==(const AuxRsaParams&, const AuxRsaParams&) = default;
};

/// M = P Q for safe primes of bits/2 bits each, h1 = r^2 mod M and
/// h2 = h1^alpha. The factors and alpha are dropped before returning.
AuxRsaParams GenerateAuxRsaParams(std::size_t bits, Rng& rng);

/// Prover knows m < q and r with c = Gamma^m r^N mod N^2.
struct InitiatorRangeProof {
  mpz_class z;
  mpz_class u;
  mpz_class w;
  mpz_class s;
  mpz_class s1;
  mpz_class s2;

  Bytes Serialize() const;
  static InitiatorRangeProof Deserialize(ByteView data);
};

InitiatorRangeProof ProveInitiatorRange(const Curve& curve, const PaillierPublicKey& pk,
                                        const AuxRsaParams& aux, const PaillierCiphertext& c,
                                        const mpz_class& m, const mpz_class& r, ByteView context,
                                        Rng& rng);
namespace detail {
/// ProveInitiatorRange without the m < q check, for tests acting as a
/// cheating prover.
InitiatorRangeProof ProveInitiatorRangeUnchecked(const Curve& curve, const PaillierPublicKey& pk,
                                                 const AuxRsaParams& aux,
                                                 const PaillierCiphertext& c, const mpz_class& m,
                                                 const mpz_class& r, ByteView context, Rng& rng);
}  // namespace detail

bool VerifyInitiatorRange(const InitiatorRangeProof& proof, const Curve& curve,
                          const PaillierPublicKey& pk, const AuxRsaParams& aux,
                          const PaillierCiphertext& c, ByteView context);

/// Prover knows b < q, y < N and r with c2 = c1^b Gamma^y r^N mod N^2. With
/// `b_point` set the proof also shows b_point = b * B.
struct RespondentRangeProof {
  mpz_class z;
  mpz_class z_prime;
  mpz_class t;
  std::optional<Point> u;
  mpz_class v;
  mpz_class w;
  mpz_class s;
  mpz_class s1;
  mpz_class s2;
  mpz_class t1;
  mpz_class t2;

  Bytes Serialize() const;
  static RespondentRangeProof Deserialize(const Curve& curve, ByteView data);
};

RespondentRangeProof ProveRespondentRange(const Curve& curve, const PaillierPublicKey& pk,
                                          const AuxRsaParams& aux, const PaillierCiphertext& c1,
                                          const PaillierCiphertext& c2, const mpz_class& b,
                                          const mpz_class& y, const mpz_class& r,
                                          const std::optional<Point>& b_point, ByteView context,
                                          Rng& rng);
bool VerifyRespondentRange(const RespondentRangeProof& proof, const Curve& curve,
                           const PaillierPublicKey& pk, const AuxRsaParams& aux,
                           const PaillierCiphertext& c1, const PaillierCiphertext& c2,
                           const std::optional<Point>& b_point, ByteView context);

}  // namespace trecdsa
