#include "trecdsa/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <functional>
#include <limits>
#include <stdexcept>

#include "trecdsa/bigint.hpp"

namespace trecdsa::kernels {
namespace {

constexpr unsigned kSieveBound = 1u << 18;
constexpr std::size_t kWindow = 1u << 14;
constexpr int kMillerRabinReps = 30;
constexpr std::size_t kNotFound = std::numeric_limits<std::size_t>::max();

void CheckBatchShape(std::span<const mpz_class> bases, std::span<const mpz_class> exps,
                     const mpz_class& modulus) {
  if (bases.size() != exps.size()) {
    throw std::invalid_argument("BatchPowMod: bases and exponents differ in length");
  }
  if (modulus <= 0) {
    throw std::invalid_argument("BatchPowMod: modulus must be positive");
  }
  for (const mpz_class& e : exps) {
    if (e < 0) {
      throw std::invalid_argument("BatchPowMod: negative exponent");
    }
  }
}

bool FermatBase2(const mpz_class& n) {
  static const mpz_class kTwo = 2;
  mpz_class r;
  const mpz_class e = n - 1;
  mpz_powm(r.get_mpz_t(), kTwo.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
  return r == 1;
}

bool PassesPrimality(const mpz_class& candidate, PrimeKind kind) {
  if (kind == PrimeKind::kPrime) {
    return mpz_probab_prime_p(candidate.get_mpz_t(), kMillerRabinReps) != 0;
  }
  const mpz_class half = (candidate - 1) / 2;
  if (!FermatBase2(half) || !FermatBase2(candidate)) {
    return false;
  }
  return mpz_probab_prime_p(half.get_mpz_t(), kMillerRabinReps) != 0 &&
         mpz_probab_prime_p(candidate.get_mpz_t(), kMillerRabinReps) != 0;
}

// Offsets i in [0, kWindow) such that base + step*i survives trial division.
std::vector<std::size_t> SieveWindow(const mpz_class& base, unsigned step, PrimeKind kind) {
  std::vector<bool> composite(kWindow, false);
  for (unsigned s : SmallPrimes()) {
    const unsigned r = static_cast<unsigned>(mpz_fdiv_ui(base.get_mpz_t(), s));
    const unsigned step_inv = static_cast<unsigned>(
        InvertMod(mpz_class(step % s), mpz_class(s)).get_ui());
    // Reject candidates that are 0 mod s; safe primes also reject 1 mod s,
    // which is exactly when s divides (p-1)/2.
    const unsigned bad_count = kind == PrimeKind::kSafe ? 2 : 1;
    for (unsigned bad = 0; bad < bad_count; ++bad) {
      const unsigned long first =
          (static_cast<unsigned long>((bad + s - r) % s) * step_inv) % s;
      for (std::size_t i = first; i < kWindow; i += s) {
        composite[i] = true;
      }
    }
  }
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < kWindow; ++i) {
    if (!composite[i]) survivors.push_back(i);
  }
  return survivors;
}

using FirstPassingFn =
    std::function<std::size_t(const std::vector<mpz_class>&, PrimeKind)>;

std::size_t FirstPassingParallel(const std::vector<mpz_class>& candidates, PrimeKind kind) {
  std::atomic<std::size_t> best{kNotFound};
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (idx >= best.load(std::memory_order_relaxed)) continue;
    if (PassesPrimality(candidates[idx], kind)) {
      std::size_t current = best.load();
      while (idx < current && !best.compare_exchange_weak(current, idx)) {
      }
    }
  }
  return best.load();
}

std::size_t FirstPassingSerial(const std::vector<mpz_class>& candidates, PrimeKind kind) {
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (PassesPrimality(candidates[i], kind)) return i;
  }
  return kNotFound;
}

mpz_class SearchPrime(std::size_t bits, PrimeKind kind, Rng& rng,
                      const FirstPassingFn& first_passing) {
  if (bits < 16) {
    throw std::invalid_argument("prime size too small");
  }
  const unsigned step = kind == PrimeKind::kSafe ? 4 : 2;
  const unsigned residue = kind == PrimeKind::kSafe ? 3 : 1;
  const mpz_class upper = mpz_class(1) << bits;
  while (true) {
    mpz_class start = rng.Bits(bits);
    mpz_setbit(start.get_mpz_t(), bits - 1);
    mpz_setbit(start.get_mpz_t(), bits - 2);
    start += (residue + step - static_cast<unsigned>(mpz_fdiv_ui(start.get_mpz_t(), step))) % step;

    for (mpz_class base = start; base < upper; base += step * kWindow) {
      const std::vector<std::size_t> offsets = SieveWindow(base, step, kind);
      std::vector<mpz_class> candidates;
      candidates.reserve(offsets.size());
      for (std::size_t off : offsets) {
        mpz_class c = base + step * off;
        if (c >= upper) break;
        candidates.push_back(std::move(c));
      }
      const std::size_t hit = first_passing(candidates, kind);
      if (hit != kNotFound) {
        return candidates[hit];
      }
    }
  }
}

}  // namespace

const std::vector<unsigned>& SmallPrimes() {
  static const std::vector<unsigned> primes = [] {
    std::vector<bool> sieve(kSieveBound, true);
    std::vector<unsigned> out;
    for (unsigned i = 3; i < kSieveBound; i += 2) {
      if (!sieve[i]) continue;
      out.push_back(i);
      for (unsigned long j = static_cast<unsigned long>(i) * i; j < kSieveBound; j += 2 * i) {
        sieve[j] = false;
      }
    }
    return out;
  }();
  return primes;
}

std::vector<mpz_class> BatchPowMod(std::span<const mpz_class> bases,
                                   std::span<const mpz_class> exps,
                                   const mpz_class& modulus) {
  CheckBatchShape(bases, exps, modulus);
  std::vector<mpz_class> out(bases.size());
  const auto n = static_cast<std::ptrdiff_t>(bases.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    mpz_powm(out[i].get_mpz_t(), bases[i].get_mpz_t(), exps[i].get_mpz_t(),
             modulus.get_mpz_t());
  }
  return out;
}

mpz_class GeneratePrime(std::size_t bits, PrimeKind kind, Rng& rng) {
  return SearchPrime(bits, kind, rng, FirstPassingParallel);
}

namespace serial {

std::vector<mpz_class> BatchPowMod(std::span<const mpz_class> bases,
                                   std::span<const mpz_class> exps,
                                   const mpz_class& modulus) {
  CheckBatchShape(bases, exps, modulus);
  std::vector<mpz_class> out;
  out.reserve(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) {
    out.push_back(PowMod(bases[i], exps[i], modulus));
  }
  return out;
}

mpz_class GeneratePrime(std::size_t bits, PrimeKind kind, Rng& rng) {
  return SearchPrime(bits, kind, rng, FirstPassingSerial);
}

}  // namespace serial

}  // namespace trecdsa::kernels
