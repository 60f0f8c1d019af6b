#pragma once

#include "trecdsa/algebra.hpp"

namespace trecdsa {

/// Proof of knowledge of x with X = xB: commitment U = rB, challenge c,
/// response z = r + cx. Checked as zB = U + cX.
struct SchnorrProof {
  Point u;
  Scalar c;
  Scalar z;

  Bytes Serialize() const;
  static SchnorrProof Deserialize(const Curve& curve, ByteView data);
};

/// Non-interactive (Fiat-Shamir) proof; the challenge hashes the context,
/// B, X and U.
SchnorrProof SchnorrProve(const Scalar& x, const Point& public_point, ByteView context, Rng& rng);
bool SchnorrVerify(const SchnorrProof& proof, const Point& public_point, ByteView context);

// Interactive moves, kept for special-soundness tests where the verifier
// picks the challenge.
struct SchnorrCommitment {
  Scalar nonce;
  Point u;
};
SchnorrCommitment SchnorrCommit(const Curve& curve, Rng& rng);
Scalar SchnorrRespond(const Scalar& x, const SchnorrCommitment& commitment,
                      const Scalar& challenge);
bool SchnorrCheck(const Point& public_point, const Point& u, const Scalar& challenge,
                  const Scalar& response);
/// Witness from two accepting transcripts sharing U: (z - z') / (c - c').
Scalar SchnorrExtract(const Scalar& c1, const Scalar& z1, const Scalar& c2, const Scalar& z2);

/// Proof of knowledge of (s, l, rho) with W = sR + lB and Z = rho B, used in
/// the signing check phase before any partial signature is revealed.
struct PartialSignatureProof {
  Point a_w;
  Point a_z;
  Scalar c;
  Scalar t_s;
  Scalar t_l;
  Scalar t_rho;

  Bytes Serialize() const;
  static PartialSignatureProof Deserialize(const Curve& curve, ByteView data);
};

PartialSignatureProof ProvePartialSignature(const Point& big_r, const Point& w, const Point& z,
                                            const Scalar& s, const Scalar& l, const Scalar& rho,
                                            ByteView context, Rng& rng);
bool VerifyPartialSignature(const PartialSignatureProof& proof, const Point& big_r,
                            const Point& w, const Point& z, ByteView context);

}  // namespace trecdsa
