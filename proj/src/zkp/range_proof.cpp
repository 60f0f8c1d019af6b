#include "trecdsa/zkp/range_proof.hpp"

#include <stdexcept>

#include "trecdsa/bigint.hpp"
#include "trecdsa/hash.hpp"
#include "trecdsa/kernels.hpp"

namespace trecdsa {
namespace {

constexpr std::uint16_t kTagM = 1;
constexpr std::uint16_t kTagH1 = 2;
constexpr std::uint16_t kTagH2 = 3;

enum : std::uint16_t {
  kTagZ = 1,
  kTagZPrime,
  kTagT,
  kTagU,
  kTagV,
  kTagW,
  kTagS,
  kTagS1,
  kTagS2,
  kTagT1,
  kTagT2,
};

void AbsorbSetting(Transcript& t, const Curve& curve, const PaillierPublicKey& pk,
                   const AuxRsaParams& aux, ByteView context) {
  t.Append("context", context)
      .Append("curve", AsBytes(curve.name()))
      .AppendMpz("N", pk.n())
      .AppendMpz("Gamma", pk.gamma())
      .AppendMpz("M", aux.m)
      .AppendMpz("h1", aux.h1)
      .AppendMpz("h2", aux.h2);
}

mpz_class Commit2(const AuxRsaParams& aux, const mpz_class& a, const mpz_class& b) {
  return Mod(PowModSigned(aux.h1, a, aux.m) * PowModSigned(aux.h2, b, aux.m), aux.m);
}

bool InUnitRange(const mpz_class& x, const mpz_class& mod) {
  return x > 0 && x < mod && IsUnit(x, mod);
}

mpz_class QCubed(const Curve& curve) {
  const mpz_class& q = curve.order();
  return q * q * q;
}

mpz_class InitiatorChallenge(const Curve& curve, const PaillierPublicKey& pk,
                             const AuxRsaParams& aux, const PaillierCiphertext& c,
                             const mpz_class& z, const mpz_class& u, const mpz_class& w,
                             ByteView context) {
  Transcript t("trecdsa/range/initiator");
  AbsorbSetting(t, curve, pk, aux, context);
  t.AppendMpz("c", c.value).AppendMpz("z", z).AppendMpz("u", u).AppendMpz("w", w);
  return t.ChallengeBelow(curve.order());
}

mpz_class RespondentChallenge(const Curve& curve, const PaillierPublicKey& pk,
                              const AuxRsaParams& aux, const PaillierCiphertext& c1,
                              const PaillierCiphertext& c2, const std::optional<Point>& b_point,
                              const RespondentRangeProof& p, ByteView context) {
  Transcript t("trecdsa/range/respondent");
  AbsorbSetting(t, curve, pk, aux, context);
  t.AppendMpz("c1", c1.value).AppendMpz("c2", c2.value);
  if (b_point) t.Append("X", b_point->ToBytes());
  t.AppendMpz("z", p.z).AppendMpz("z'", p.z_prime).AppendMpz("t", p.t);
  if (p.u) t.Append("u", p.u->ToBytes());
  t.AppendMpz("v", p.v).AppendMpz("w", p.w);
  return t.ChallengeBelow(curve.order());
}

}  // namespace

bool AuxRsaParams::IsWellFormed() const {
  if (m < 3 || mpz_even_p(m.get_mpz_t()) || BitLength(m) < 256) return false;
  for (const mpz_class* h : {&h1, &h2}) {
    if (*h <= 1 || *h >= m - 1 || !IsUnit(*h, m)) return false;
  }
  return true;
}

std::size_t AuxRsaParams::bits() const { return BitLength(m); }

Bytes AuxRsaParams::Serialize() const {
  TlvWriter w;
  w.Put(kTagM, EncodeMpz(m)).Put(kTagH1, EncodeMpz(h1)).Put(kTagH2, EncodeMpz(h2));
  return w.Take();
}

AuxRsaParams AuxRsaParams::Deserialize(ByteView data) {
  TlvReader r(data);
  AuxRsaParams out{DecodeMpz(r.Get(kTagM)), DecodeMpz(r.Get(kTagH1)), DecodeMpz(r.Get(kTagH2))};
  r.ExpectEnd();
  if (!out.IsWellFormed()) throw DecodeError("auxiliary RSA parameters are malformed");
  return out;
}

AuxRsaParams GenerateAuxRsaParams(std::size_t bits, Rng& rng) {
  if (bits < 256 || bits % 2 != 0) {
    throw std::invalid_argument("auxiliary modulus must be even-sized and >= 256 bits");
  }
  while (true) {
    const mpz_class p = kernels::GeneratePrime(bits / 2, kernels::PrimeKind::kSafe, rng);
    const mpz_class q = kernels::GeneratePrime(bits / 2, kernels::PrimeKind::kSafe, rng);
    if (p == q) continue;
    AuxRsaParams out;
    out.m = p * q;
    // Squares generate the order p'q' subgroup with overwhelming probability.
    const mpz_class order = ((p - 1) / 2) * ((q - 1) / 2);
    const mpz_class r = rng.UnitBelow(out.m);
    out.h1 = PowMod(r, 2, out.m);
    const mpz_class alpha = 1 + rng.Below(order - 1);
    out.h2 = PowMod(out.h1, alpha, out.m);
    if (out.IsWellFormed() && out.h1 != out.h2) return out;
  }
}

Bytes InitiatorRangeProof::Serialize() const {
  TlvWriter out;
  out.Put(kTagZ, EncodeMpz(z))
      .Put(kTagU, EncodeMpz(u))
      .Put(kTagW, EncodeMpz(w))
      .Put(kTagS, EncodeMpz(s))
      .Put(kTagS1, EncodeMpz(s1))
      .Put(kTagS2, EncodeMpz(s2));
  return out.Take();
}

InitiatorRangeProof InitiatorRangeProof::Deserialize(ByteView data) {
  TlvReader r(data);
  InitiatorRangeProof p;
  p.z = DecodeMpz(r.Get(kTagZ));
  p.u = DecodeMpz(r.Get(kTagU));
  p.w = DecodeMpz(r.Get(kTagW));
  p.s = DecodeMpz(r.Get(kTagS));
  p.s1 = DecodeMpz(r.Get(kTagS1));
  p.s2 = DecodeMpz(r.Get(kTagS2));
  r.ExpectEnd();
  return p;
}

InitiatorRangeProof ProveInitiatorRange(const Curve& curve, const PaillierPublicKey& pk,
                                        const AuxRsaParams& aux, const PaillierCiphertext& c,
                                        const mpz_class& m, const mpz_class& r, ByteView context,
                                        Rng& rng) {
  if (m < 0 || m >= curve.order()) {
    throw std::invalid_argument("range proof witness out of range");
  }
  return detail::ProveInitiatorRangeUnchecked(curve, pk, aux, c, m, r, context, rng);
}

namespace detail {

InitiatorRangeProof ProveInitiatorRangeUnchecked(const Curve& curve, const PaillierPublicKey& pk,
                                                 const AuxRsaParams& aux,
                                                 const PaillierCiphertext& c, const mpz_class& m,
                                                 const mpz_class& r, ByteView context, Rng& rng) {
  const mpz_class& q = curve.order();
  const mpz_class& n = pk.n();
  const mpz_class& n2 = pk.n_squared();

  const mpz_class alpha = rng.Below(QCubed(curve));
  const mpz_class beta = rng.UnitBelow(n);
  const mpz_class gamma = rng.Below(QCubed(curve) * aux.m);
  const mpz_class rho = rng.Below(q * aux.m);

  InitiatorRangeProof p;
  p.z = Commit2(aux, m, rho);
  p.u = Mod(pk.PowGamma(alpha) * PowMod(beta, n, n2), n2);
  p.w = Commit2(aux, alpha, gamma);
  const mpz_class e = InitiatorChallenge(curve, pk, aux, c, p.z, p.u, p.w, context);
  p.s = Mod(PowMod(r, e, n) * beta, n);
  p.s1 = e * m + alpha;
  p.s2 = e * rho + gamma;
  return p;
}

}  // namespace detail

bool VerifyInitiatorRange(const InitiatorRangeProof& p, const Curve& curve,
                          const PaillierPublicKey& pk, const AuxRsaParams& aux,
                          const PaillierCiphertext& c, ByteView context) {
  const mpz_class& n = pk.n();
  const mpz_class& n2 = pk.n_squared();
  if (!aux.IsWellFormed() || !pk.IsValidCiphertext(c)) return false;
  if (!InUnitRange(p.z, aux.m) || !InUnitRange(p.w, aux.m)) return false;
  if (!InUnitRange(p.u, n2) || !InUnitRange(p.s, n)) return false;
  if (p.s1 < 0 || p.s1 > QCubed(curve) || p.s2 < 0) return false;

  const mpz_class e = InitiatorChallenge(curve, pk, aux, c, p.z, p.u, p.w, context);
  const mpz_class u_check =
      Mod(pk.PowGamma(p.s1) * PowMod(p.s, n, n2) % n2 * PowModSigned(c.value, -e, n2), n2);
  if (u_check != p.u) return false;
  return Commit2(aux, p.s1, p.s2) == Mod(PowMod(p.z, e, aux.m) * p.w, aux.m);
}

Bytes RespondentRangeProof::Serialize() const {
  TlvWriter out;
  out.Put(kTagZ, EncodeMpz(z)).Put(kTagZPrime, EncodeMpz(z_prime)).Put(kTagT, EncodeMpz(t));
  if (u) out.Put(kTagU, u->ToBytes());
  out.Put(kTagV, EncodeMpz(v))
      .Put(kTagW, EncodeMpz(w))
      .Put(kTagS, EncodeMpz(s))
      .Put(kTagS1, EncodeMpz(s1))
      .Put(kTagS2, EncodeMpz(s2))
      .Put(kTagT1, EncodeMpz(t1))
      .Put(kTagT2, EncodeMpz(t2));
  return out.Take();
}

RespondentRangeProof RespondentRangeProof::Deserialize(const Curve& curve, ByteView data) {
  TlvReader r(data);
  RespondentRangeProof p;
  p.z = DecodeMpz(r.Get(kTagZ));
  p.z_prime = DecodeMpz(r.Get(kTagZPrime));
  p.t = DecodeMpz(r.Get(kTagT));
  if (!r.AtEnd() && r.PeekTag() == kTagU) p.u = Point::FromBytes(curve, r.Get(kTagU));
  p.v = DecodeMpz(r.Get(kTagV));
  p.w = DecodeMpz(r.Get(kTagW));
  p.s = DecodeMpz(r.Get(kTagS));
  p.s1 = DecodeMpz(r.Get(kTagS1));
  p.s2 = DecodeMpz(r.Get(kTagS2));
  p.t1 = DecodeMpz(r.Get(kTagT1));
  p.t2 = DecodeMpz(r.Get(kTagT2));
  r.ExpectEnd();
  return p;
}

RespondentRangeProof ProveRespondentRange(const Curve& curve, const PaillierPublicKey& pk,
                                          const AuxRsaParams& aux, const PaillierCiphertext& c1,
                                          const PaillierCiphertext& c2, const mpz_class& b,
                                          const mpz_class& y, const mpz_class& r,
                                          const std::optional<Point>& b_point, ByteView context,
                                          Rng& rng) {
  const mpz_class& q = curve.order();
  const mpz_class& n = pk.n();
  const mpz_class& n2 = pk.n_squared();
  if (b < 0 || b >= q || y < 0 || y >= n) {
    throw std::invalid_argument("range proof witness out of range");
  }

  const mpz_class alpha = rng.Below(QCubed(curve));
  const mpz_class rho = rng.Below(q * aux.m);
  const mpz_class rho_prime = rng.Below(QCubed(curve) * aux.m);
  const mpz_class sigma = rng.Below(q * aux.m);
  const mpz_class tau = rng.Below(q * aux.m);
  const mpz_class beta = rng.UnitBelow(n);
  const mpz_class gamma = rng.UnitBelow(n);

  RespondentRangeProof p;
  p.z = Commit2(aux, b, rho);
  p.z_prime = Commit2(aux, alpha, rho_prime);
  p.t = Commit2(aux, y, sigma);
  if (b_point) p.u = Point::BaseMul(Scalar(curve, alpha));
  p.v = Mod(PowMod(c1.value, alpha, n2) * pk.PowGamma(gamma) % n2 * PowMod(beta, n, n2), n2);
  p.w = Commit2(aux, gamma, tau);
  const mpz_class e = RespondentChallenge(curve, pk, aux, c1, c2, b_point, p, context);
  p.s = Mod(PowMod(r, e, n) * beta, n);
  p.s1 = e * b + alpha;
  p.s2 = e * rho + rho_prime;
  p.t1 = e * y + gamma;
  p.t2 = e * sigma + tau;
  return p;
}

bool VerifyRespondentRange(const RespondentRangeProof& p, const Curve& curve,
                           const PaillierPublicKey& pk, const AuxRsaParams& aux,
                           const PaillierCiphertext& c1, const PaillierCiphertext& c2,
                           const std::optional<Point>& b_point, ByteView context) {
  const mpz_class& n = pk.n();
  const mpz_class& n2 = pk.n_squared();
  if (!aux.IsWellFormed() || !pk.IsValidCiphertext(c1) || !pk.IsValidCiphertext(c2)) {
    return false;
  }
  if (b_point.has_value() != p.u.has_value()) return false;
  if (p.u && &p.u->curve() != &curve) return false;
  for (const mpz_class* x : {&p.z, &p.z_prime, &p.t, &p.w}) {
    if (!InUnitRange(*x, aux.m)) return false;
  }
  if (!InUnitRange(p.v, n2) || !InUnitRange(p.s, n)) return false;
  if (p.s1 < 0 || p.s1 > QCubed(curve) || p.s2 < 0 || p.t1 < 0 || p.t2 < 0) return false;

  const mpz_class e = RespondentChallenge(curve, pk, aux, c1, c2, b_point, p, context);
  if (b_point) {
    const Scalar es(curve, e);
    if (!(Point::BaseMul(Scalar(curve, p.s1)) == es * *b_point + *p.u)) return false;
  }
  if (Commit2(aux, p.s1, p.s2) != Mod(PowMod(p.z, e, aux.m) * p.z_prime, aux.m)) return false;
  if (Commit2(aux, p.t1, p.t2) != Mod(p.w * PowMod(p.t, e, aux.m), aux.m)) return false;
  const mpz_class lhs =
      Mod(PowMod(c1.value, p.s1, n2) * PowMod(p.s, n, n2) % n2 * pk.PowGamma(p.t1), n2);
  const mpz_class rhs = Mod(PowMod(c2.value, e, n2) * p.v, n2);
  return lhs == rhs;
}

}  // namespace trecdsa
