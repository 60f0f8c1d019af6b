#pragma once

// Data-parallel number-theory kernels.
//
// Each kernel has an OpenMP implementation (used by the library) and a plain
// serial implementation in `serial::` kept as the reference for tests and the
// benchmark. Both produce bit-identical results for identical inputs,
// independent of the thread count.

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <vector>

#include "trecdsa/random.hpp"

namespace trecdsa::kernels {

/// out[i] = bases[i] ^ exps[i] mod modulus. Exponents must be non-negative.
std::vector<mpz_class> BatchPowMod(std::span<const mpz_class> bases,
                                   std::span<const mpz_class> exps,
                                   const mpz_class& modulus);

enum class PrimeKind {
  kPrime,
  /// p with (p-1)/2 also prime.
  kSafe,
};

/// Random prime of exactly `bits` bits with the top two bits set, so the
/// product of two such primes has exactly 2*bits bits.
///
/// Candidates are scanned upward from a random start in sieved windows; the
/// survivors of each window are primality-tested in parallel and the lowest
/// passing candidate wins.
mpz_class GeneratePrime(std::size_t bits, PrimeKind kind, Rng& rng);

/// Odd primes below the sieve bound (2^18).
const std::vector<unsigned>& SmallPrimes();

namespace serial {

std::vector<mpz_class> BatchPowMod(std::span<const mpz_class> bases,
                                   std::span<const mpz_class> exps,
                                   const mpz_class& modulus);

mpz_class GeneratePrime(std::size_t bits, PrimeKind kind, Rng& rng);

}  // namespace serial

}  // namespace trecdsa::kernels
