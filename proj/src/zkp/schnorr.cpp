#include "trecdsa/zkp/schnorr.hpp"

#include "trecdsa/hash.hpp"

namespace trecdsa {
namespace {

constexpr std::uint16_t kTagU = 1;
constexpr std::uint16_t kTagC = 2;
constexpr std::uint16_t kTagZ = 3;

constexpr std::uint16_t kTagAw = 1;
constexpr std::uint16_t kTagAz = 2;
constexpr std::uint16_t kTagPc = 3;
constexpr std::uint16_t kTagTs = 4;
constexpr std::uint16_t kTagTl = 5;
constexpr std::uint16_t kTagTrho = 6;

Scalar SchnorrChallenge(const Point& public_point, const Point& u, ByteView context) {
  const Curve& curve = public_point.curve();
  Transcript t("trecdsa/schnorr");
  t.Append("context", context)
      .Append("B", Point::Generator(curve).ToBytes())
      .Append("X", public_point.ToBytes())
      .Append("U", u.ToBytes());
  return Scalar(curve, t.ChallengeBelow(curve.order()));
}

Scalar PartialSignatureChallenge(const Point& big_r, const Point& w, const Point& z,
                                 const Point& a_w, const Point& a_z, ByteView context) {
  const Curve& curve = big_r.curve();
  Transcript t("trecdsa/partial-signature");
  t.Append("context", context)
      .Append("B", Point::Generator(curve).ToBytes())
      .Append("R", big_r.ToBytes())
      .Append("W", w.ToBytes())
      .Append("Z", z.ToBytes())
      .Append("Aw", a_w.ToBytes())
      .Append("Az", a_z.ToBytes());
  return Scalar(curve, t.ChallengeBelow(curve.order()));
}

}  // namespace

Bytes SchnorrProof::Serialize() const {
  TlvWriter w;
  w.Put(kTagU, u.ToBytes()).Put(kTagC, c.ToBytes()).Put(kTagZ, z.ToBytes());
  return w.Take();
}

SchnorrProof SchnorrProof::Deserialize(const Curve& curve, ByteView data) {
  TlvReader r(data);
  SchnorrProof out{Point::FromBytes(curve, r.Get(kTagU)), Scalar::FromBytes(curve, r.Get(kTagC)),
                   Scalar::FromBytes(curve, r.Get(kTagZ))};
  r.ExpectEnd();
  return out;
}

SchnorrProof SchnorrProve(const Scalar& x, const Point& public_point, ByteView context,
                          Rng& rng) {
  const SchnorrCommitment commitment = SchnorrCommit(x.curve(), rng);
  const Scalar c = SchnorrChallenge(public_point, commitment.u, context);
  return SchnorrProof{commitment.u, c, SchnorrRespond(x, commitment, c)};
}

bool SchnorrVerify(const SchnorrProof& proof, const Point& public_point, ByteView context) {
  if (&proof.u.curve() != &public_point.curve()) return false;
  if (!(SchnorrChallenge(public_point, proof.u, context) == proof.c)) return false;
  return SchnorrCheck(public_point, proof.u, proof.c, proof.z);
}

SchnorrCommitment SchnorrCommit(const Curve& curve, Rng& rng) {
  Scalar nonce = Scalar::Random(curve, rng);
  Point u = Point::BaseMul(nonce);
  return SchnorrCommitment{std::move(nonce), std::move(u)};
}

Scalar SchnorrRespond(const Scalar& x, const SchnorrCommitment& commitment,
                      const Scalar& challenge) {
  return commitment.nonce + challenge * x;
}

bool SchnorrCheck(const Point& public_point, const Point& u, const Scalar& challenge,
                  const Scalar& response) {
  return Point::BaseMul(response) == u + challenge * public_point;
}

Scalar SchnorrExtract(const Scalar& c1, const Scalar& z1, const Scalar& c2, const Scalar& z2) {
  return (z1 - z2) * (c1 - c2).Inverse();
}

Bytes PartialSignatureProof::Serialize() const {
  TlvWriter w;
  w.Put(kTagAw, a_w.ToBytes())
      .Put(kTagAz, a_z.ToBytes())
      .Put(kTagPc, c.ToBytes())
      .Put(kTagTs, t_s.ToBytes())
      .Put(kTagTl, t_l.ToBytes())
      .Put(kTagTrho, t_rho.ToBytes());
  return w.Take();
}

PartialSignatureProof PartialSignatureProof::Deserialize(const Curve& curve, ByteView data) {
  TlvReader r(data);
  PartialSignatureProof out{Point::FromBytes(curve, r.Get(kTagAw)),
                            Point::FromBytes(curve, r.Get(kTagAz)),
                            Scalar::FromBytes(curve, r.Get(kTagPc)),
                            Scalar::FromBytes(curve, r.Get(kTagTs)),
                            Scalar::FromBytes(curve, r.Get(kTagTl)),
                            Scalar::FromBytes(curve, r.Get(kTagTrho))};
  r.ExpectEnd();
  return out;
}

PartialSignatureProof ProvePartialSignature(const Point& big_r, const Point& w, const Point& z,
                                            const Scalar& s, const Scalar& l, const Scalar& rho,
                                            ByteView context, Rng& rng) {
  const Curve& curve = big_r.curve();
  const Scalar a = Scalar::Random(curve, rng);
  const Scalar b = Scalar::Random(curve, rng);
  const Scalar d = Scalar::Random(curve, rng);
  Point a_w = a * big_r + Point::BaseMul(b);
  Point a_z = Point::BaseMul(d);
  const Scalar c = PartialSignatureChallenge(big_r, w, z, a_w, a_z, context);
  return PartialSignatureProof{std::move(a_w), std::move(a_z), c,
                               a + c * s,      b + c * l,      d + c * rho};
}

bool VerifyPartialSignature(const PartialSignatureProof& proof, const Point& big_r,
                            const Point& w, const Point& z, ByteView context) {
  if (!(PartialSignatureChallenge(big_r, w, z, proof.a_w, proof.a_z, context) == proof.c)) {
    return false;
  }
  return proof.t_s * big_r + Point::BaseMul(proof.t_l) == proof.a_w + proof.c * w &&
         Point::BaseMul(proof.t_rho) == proof.a_z + proof.c * z;
}

}  // namespace trecdsa
