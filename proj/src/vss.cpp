#include "trecdsa/vss.hpp"

namespace trecdsa {
namespace {

constexpr std::uint16_t kTagC0 = 1;
constexpr std::uint16_t kTagC1 = 2;

}  // namespace

Point VssCommitments::ShareImage(std::uint32_t x) const {
  return c0 + Scalar(c0.curve(), static_cast<long>(x)) * c1;
}

Bytes VssCommitments::Serialize() const {
  TlvWriter w;
  w.Put(kTagC0, c0.ToBytes()).Put(kTagC1, c1.ToBytes());
  return w.Take();
}

VssCommitments VssCommitments::Deserialize(const Curve& curve, ByteView data) {
  TlvReader r(data);
  VssCommitments out{Point::FromBytes(curve, r.Get(kTagC0)),
                     Point::FromBytes(curve, r.Get(kTagC1))};
  r.ExpectEnd();
  return out;
}

VssDealing VssDeal(const Scalar& secret, Rng& rng) {
  return VssFromCoefficients(secret, Scalar::Random(secret.curve(), rng));
}

VssDealing VssFromCoefficients(const Scalar& a0, const Scalar& a1) {
  const Curve& curve = a0.curve();
  auto at = [&](long x) { return a0 + Scalar(curve, x) * a1; };
  return VssDealing{VssCommitments{Point::BaseMul(a0), Point::BaseMul(a1)},
                    {at(1), at(2), at(3)}};
}

bool VssVerifyShare(const VssCommitments& commitments, std::uint32_t x, const Scalar& share) {
  return Point::BaseMul(share) == commitments.ShareImage(x);
}

Scalar VssReconstruct(std::uint32_t x1, const Scalar& s1, std::uint32_t x2, const Scalar& s2) {
  const Curve& curve = s1.curve();
  return LagrangeWeight(curve, x1, x2) * s1 + LagrangeWeight(curve, x2, x1) * s2;
}

}  // namespace trecdsa
