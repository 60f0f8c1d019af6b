#include "trecdsa/zkp/factorization.hpp"

#include <stdexcept>

#include "trecdsa/bigint.hpp"
#include "trecdsa/hash.hpp"
#include "trecdsa/kernels.hpp"

namespace trecdsa {
namespace {

constexpr std::uint16_t kTagIterations = 1;
constexpr std::uint16_t kTagBases = 2;
constexpr std::uint16_t kTagCommitment = 3;
constexpr std::uint16_t kTagChallenge = 4;
constexpr std::uint16_t kTagResponse = 5;

std::vector<mpz_class> DeriveChallenges(const FactorizationParams& params, const mpz_class& n,
                                        ByteView context,
                                        const std::vector<std::vector<mpz_class>>& commitments) {
  Transcript t("trecdsa/factorization");
  t.Append("context", context).AppendMpz("N", n);
  for (const auto& row : commitments) {
    for (const mpz_class& x : row) t.AppendMpz("x", x);
  }
  std::vector<mpz_class> out;
  out.reserve(params.iterations);
  for (std::size_t j = 0; j < params.iterations; ++j) {
    Transcript tj = t;
    tj.AppendU32("iteration", static_cast<std::uint32_t>(j));
    out.push_back(tj.ChallengeBelow(params.challenge_bound()));
  }
  return out;
}

bool ShapeOk(const FactorizationParams& params, const FactorizationProof& proof) {
  if (proof.commitments.size() != params.iterations ||
      proof.challenges.size() != params.iterations ||
      proof.responses.size() != params.iterations) {
    return false;
  }
  for (const auto& row : proof.commitments) {
    if (row.size() != params.bases) return false;
  }
  return true;
}

}  // namespace

FactorizationParams FactorizationParams::ForModulusBits(std::size_t bits) {
  FactorizationParams p;
  p.modulus_bits = bits;
  p.bound_a = mpz_class(1) << (bits - 1);
  return p;
}

void FactorizationParams::Validate() const {
  const mpz_class lower = mpz_class(3) << (modulus_bits / 2 + 1 + challenge_bits);
  if (!(lower * static_cast<unsigned long>(iterations) < bound_a)) {
    throw std::invalid_argument("factorization proof: A too small for l and B");
  }
  if (!(bound_a <= (mpz_class(1) << (modulus_bits - 1)))) {
    throw std::invalid_argument("factorization proof: A must be below N");
  }
  if (iterations == 0 || bases == 0) {
    throw std::invalid_argument("factorization proof: empty parameters");
  }
}

std::vector<mpz_class> FactorizationBases(const mpz_class& n, ByteView context, std::size_t k) {
  std::vector<mpz_class> out;
  out.reserve(k);
  const std::size_t bytes = (BitLength(n) + 7) / 8 + 16;
  for (std::uint32_t i = 0; out.size() < k; ++i) {
    Transcript t("trecdsa/factorization/base");
    t.Append("context", context).AppendMpz("N", n).AppendU32("index", i);
    const mpz_class z = Mod(DecodeMpz(t.Expand(bytes)), n);
    if (z > 1 && IsUnit(z, n)) out.push_back(z);
  }
  return out;
}

Bytes FactorizationProof::Serialize() const {
  TlvWriter w;
  w.PutU32(kTagIterations, static_cast<std::uint32_t>(commitments.size()));
  w.PutU32(kTagBases,
           static_cast<std::uint32_t>(commitments.empty() ? 0 : commitments.front().size()));
  for (const auto& row : commitments) {
    for (const mpz_class& x : row) w.Put(kTagCommitment, EncodeMpz(x));
  }
  for (const mpz_class& e : challenges) w.Put(kTagChallenge, EncodeMpz(e));
  for (const mpz_class& y : responses) w.Put(kTagResponse, EncodeMpz(y));
  return w.Take();
}

FactorizationProof FactorizationProof::Deserialize(ByteView data) {
  TlvReader r(data);
  const std::uint32_t l = r.GetU32(kTagIterations);
  const std::uint32_t k = r.GetU32(kTagBases);
  if (l == 0 || k == 0 || l > 64 || k > 64) {
    throw DecodeError("factorization proof: bad dimensions");
  }
  FactorizationProof proof;
  proof.commitments.assign(l, {});
  for (auto& row : proof.commitments) {
    for (std::uint32_t i = 0; i < k; ++i) row.push_back(DecodeMpz(r.Get(kTagCommitment)));
  }
  for (std::uint32_t j = 0; j < l; ++j) proof.challenges.push_back(DecodeMpz(r.Get(kTagChallenge)));
  for (std::uint32_t j = 0; j < l; ++j) proof.responses.push_back(DecodeMpz(r.Get(kTagResponse)));
  r.ExpectEnd();
  return proof;
}

FactorizationProof ProveFactorization(const mpz_class& n, const mpz_class& phi, ByteView context,
                                      Rng& rng) {
  const FactorizationParams params = FactorizationParams::ForModulusBits(BitLength(n));
  params.Validate();
  const std::vector<mpz_class> bases = FactorizationBases(n, context, params.bases);
  const mpz_class n_minus_phi = n - phi;

  while (true) {
    std::vector<mpz_class> r(params.iterations);
    std::vector<mpz_class> flat_bases;
    std::vector<mpz_class> flat_exps;
    for (std::size_t j = 0; j < params.iterations; ++j) {
      r[j] = rng.Below(params.bound_a);
      for (const mpz_class& z : bases) {
        flat_bases.push_back(z);
        flat_exps.push_back(r[j]);
      }
    }
    const std::vector<mpz_class> flat = kernels::BatchPowMod(flat_bases, flat_exps, n);

    FactorizationProof proof;
    proof.commitments.resize(params.iterations);
    for (std::size_t j = 0; j < params.iterations; ++j) {
      proof.commitments[j].assign(flat.begin() + j * params.bases,
                                  flat.begin() + (j + 1) * params.bases);
    }
    proof.challenges = DeriveChallenges(params, n, context, proof.commitments);

    bool overflow = false;
    for (std::size_t j = 0; j < params.iterations; ++j) {
      mpz_class y = r[j] + proof.challenges[j] * n_minus_phi;
      if (y >= params.bound_a) overflow = true;
      proof.responses.push_back(std::move(y));
    }
    if (!overflow) return proof;
  }
}

bool CheckFactorizationIteration(const FactorizationParams& params, const mpz_class& n,
                                 const std::vector<mpz_class>& bases,
                                 const std::vector<mpz_class>& commitments, const mpz_class& e,
                                 const mpz_class& y) {
  if (commitments.size() != bases.size()) return false;
  if (y < 0 || y >= params.bound_a) return false;
  if (e < 0 || e >= params.challenge_bound()) return false;
  const mpz_class exponent = y - n * e;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (commitments[i] <= 0 || commitments[i] >= n) return false;
    if (PowModSigned(bases[i], exponent, n) != commitments[i]) return false;
  }
  return true;
}

bool VerifyFactorization(const FactorizationProof& proof, const mpz_class& n, ByteView context) {
  if (n < 3 || mpz_even_p(n.get_mpz_t())) return false;
  const FactorizationParams params = FactorizationParams::ForModulusBits(BitLength(n));
  try {
    params.Validate();
  } catch (const std::invalid_argument&) {
    return false;
  }
  if (!ShapeOk(params, proof)) return false;
  if (DeriveChallenges(params, n, context, proof.commitments) != proof.challenges) return false;
  const std::vector<mpz_class> bases = FactorizationBases(n, context, params.bases);
  for (std::size_t j = 0; j < params.iterations; ++j) {
    if (!CheckFactorizationIteration(params, n, bases, proof.commitments[j], proof.challenges[j],
                                     proof.responses[j])) {
      return false;
    }
  }
  return true;
}

}  // namespace trecdsa
