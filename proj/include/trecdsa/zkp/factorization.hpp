#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "trecdsa/bytes.hpp"
#include "trecdsa/random.hpp"

namespace trecdsa {

/// Size parameters for the proof of knowledge of the factorization of N.
/// Each iteration commits to x_i = z_i^r mod N for every base z_i, takes a
/// challenge e < B and answers y = r + e(N - phi(N)); the verifier checks
/// 0 <= y < A and z_i^(y - N e) = x_i.
struct FactorizationParams {
  std::size_t modulus_bits = 0;
  std::size_t iterations = 8;      // l
  std::size_t bases = 16;          // k
  std::size_t challenge_bits = 16; // B = 2^challenge_bits
  mpz_class bound_a;               // A

  /// B = 2^16, l = 8, k = 16, A = 2^(bits - 1).
  static FactorizationParams ForModulusBits(std::size_t bits);
  /// Requires 3 * 2^(bits/2 + 1) * l * B < A < 2^(bits-1) (so A < N).
  void Validate() const;
  mpz_class challenge_bound() const { return mpz_class(1) << challenge_bits; }
};

/// k bases hashed into Z*_N, bound to N and the caller context.
std::vector<mpz_class> FactorizationBases(const mpz_class& n, ByteView context, std::size_t k);

struct FactorizationProof {
  std::vector<std::vector<mpz_class>> commitments;  // l rows of k values
  std::vector<mpz_class> challenges;                // e_j
  std::vector<mpz_class> responses;                 // y_j

  Bytes Serialize() const;
  static FactorizationProof Deserialize(ByteView data);
};

/// phi is phi(N) = (p-1)(q-1). Challenges are derived from all commitments
/// at once; if any response overflows A the whole proof is redrawn.
FactorizationProof ProveFactorization(const mpz_class& n, const mpz_class& phi, ByteView context,
                                      Rng& rng);
bool VerifyFactorization(const FactorizationProof& proof, const mpz_class& n, ByteView context);

/// Verification equations of a single iteration, without the Fiat-Shamir
/// binding. Exposed for tests that drive the challenge directly.
bool CheckFactorizationIteration(const FactorizationParams& params, const mpz_class& n,
                                 const std::vector<mpz_class>& bases,
                                 const std::vector<mpz_class>& commitments, const mpz_class& e,
                                 const mpz_class& y);

}  // namespace trecdsa
