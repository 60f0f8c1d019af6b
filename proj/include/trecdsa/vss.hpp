#pragma once

// Degree-1 Feldman secret sharing over the curve order: f(x) = a0 + a1 x,
// commitments C0 = a0 B and C1 = a1 B, shares f(1), f(2), f(3).

#include <array>
#include <cstdint>

#include "trecdsa/algebra.hpp"

namespace trecdsa {

struct VssCommitments {
  Point c0;
  Point c1;

  /// f(x) B = C0 + x C1.
  Point ShareImage(std::uint32_t x) const;

  Bytes Serialize() const;
  static VssCommitments Deserialize(const Curve& curve, ByteView data);

  friend bool operator==(const VssCommitments&, const VssCommitments&) = default;
};

struct VssDealing {
  VssCommitments commitments;
  std::array<Scalar, 3> shares;  // f(1), f(2), f(3)

  const Scalar& ShareAt(std::uint32_t x) const { return shares.at(x - 1); }
};

VssDealing VssDeal(const Scalar& secret, Rng& rng);
/// Deterministic dealing from explicit coefficients.
VssDealing VssFromCoefficients(const Scalar& a0, const Scalar& a1);

bool VssVerifyShare(const VssCommitments& commitments, std::uint32_t x, const Scalar& share);

/// Interpolates f(0) from two shares at distinct points.
Scalar VssReconstruct(std::uint32_t x1, const Scalar& s1, std::uint32_t x2, const Scalar& s2);

}  // namespace trecdsa
