#include "trecdsa/protocol/key_share.hpp"

#include <algorithm>
#include <stdexcept>

#include "trecdsa/bigint.hpp"

namespace trecdsa {
namespace {

constexpr std::string_view kDerivationTag = "trecdsa/derive/v1";

enum : std::uint16_t {
  kTagF1 = 1,
  kTagF2,
  kTagSigma31,
  kTagSigma32,
};

enum : std::uint16_t {
  kTagCurve = 1,
  kTagHash,
  kTagRole,
  kTagPublicKey,
  kTagRecoveryKey,
  kTagPublicData,
  kTagRec13,
  kTagRec23,
  kTagPaillierPublic,
  kTagAux,
  kTagPeerPaillier,
  kTagPeerAux,
};

enum : std::uint16_t {
  kTagX = 1,
  kTagD,
  kTagPaillierSecret,
};

Point SigmaTerm(const KeygenPublicData& p, PartyId who) {
  const Curve& curve = p.sigma31_point.curve();
  switch (who) {
    case PartyId::kP1: return p.sigma31_point;
    case PartyId::kP2: return p.sigma32_point;
    case PartyId::kP3:
      // f3(1) = 2 f3(2) - f3(3) for the virtual dealer with f3(2) = sigma_{3,1},
      // f3(3) = sigma_{3,2}.
      return Scalar(curve, 2L) * p.sigma31_point - p.sigma32_point;
    default: throw std::invalid_argument("no share point for broadcast id");
  }
}

PartyId RoleFromByte(std::uint32_t b) {
  if (b != 1 && b != 2) throw DecodeError("key share role must be P1 or P2");
  return static_cast<PartyId>(b);
}

}  // namespace

Point KeygenPublicData::PublicKey() const {
  const Curve& curve = f1.c0.curve();
  return f1.c0 + f2.c0 + Scalar(curve, 3L) * sigma31_point - Scalar(curve, 2L) * sigma32_point;
}

Point KeygenPublicData::SharePoint(PartyId who) const {
  const std::uint32_t e = EvalPoint(who);
  return f1.ShareImage(e) + f2.ShareImage(e) + SigmaTerm(*this, who);
}

Bytes KeygenPublicData::Serialize() const {
  TlvWriter w;
  w.Put(kTagF1, f1.Serialize())
      .Put(kTagF2, f2.Serialize())
      .Put(kTagSigma31, sigma31_point.ToBytes())
      .Put(kTagSigma32, sigma32_point.ToBytes());
  return w.Take();
}

KeygenPublicData KeygenPublicData::Deserialize(const Curve& curve, ByteView data) {
  TlvReader r(data);
  KeygenPublicData out{VssCommitments::Deserialize(curve, r.Get(kTagF1)),
                       VssCommitments::Deserialize(curve, r.Get(kTagF2)),
                       Point::FromBytes(curve, r.Get(kTagSigma31)),
                       Point::FromBytes(curve, r.Get(kTagSigma32))};
  r.ExpectEnd();
  return out;
}

Bytes KeyShareRecord::SerializePublic() const {
  TlvWriter w;
  w.PutU32(kTagCurve, static_cast<std::uint32_t>(config.curve_id))
      .PutU32(kTagHash, static_cast<std::uint32_t>(config.hash_id))
      .PutU32(kTagRole, static_cast<std::uint32_t>(role))
      .Put(kTagPublicKey, public_key.ToBytes())
      .Put(kTagRecoveryKey, recovery_key.ToBytes())
      .Put(kTagPublicData, public_data.Serialize())
      .Put(kTagRec13, rec13)
      .Put(kTagRec23, rec23)
      .Put(kTagPaillierPublic, paillier.public_key().Serialize())
      .Put(kTagAux, aux.Serialize())
      .Put(kTagPeerPaillier, peer_paillier.Serialize())
      .Put(kTagPeerAux, peer_aux.Serialize());
  return w.Take();
}

Bytes KeyShareRecord::SerializeSecret() const {
  TlvWriter w;
  w.Put(kTagX, x.ToBytes())
      .Put(kTagD, derivation_secret)
      .Put(kTagPaillierSecret, paillier.SerializeSecret());
  return w.Take();
}

KeyShareRecord KeyShareRecord::Deserialize(ByteView public_part, ByteView secret_part) {
  TlvReader pub(public_part);
  CurveConfig config;
  config.curve_id = static_cast<CurveId>(pub.GetU32(kTagCurve));
  config.hash_id = static_cast<HashId>(pub.GetU32(kTagHash));
  const Curve& curve = [&]() -> const Curve& {
    try {
      return config.curve();
    } catch (const std::exception&) {
      throw DecodeError("unknown curve id");
    }
  }();
  if (config.hash_id != HashId::kSha256 && config.hash_id != HashId::kSha3_256) {
    throw DecodeError("unknown hash id");
  }
  const PartyId role = RoleFromByte(pub.GetU32(kTagRole));
  Point y = Point::FromBytes(curve, pub.Get(kTagPublicKey));
  Point pk3 = Point::FromBytes(curve, pub.Get(kTagRecoveryKey));
  KeygenPublicData public_data = KeygenPublicData::Deserialize(curve, pub.Get(kTagPublicData));
  Bytes rec13 = pub.Get(kTagRec13);
  Bytes rec23 = pub.Get(kTagRec23);
  const PaillierPublicKey own_pk = PaillierPublicKey::Deserialize(pub.Get(kTagPaillierPublic));
  AuxRsaParams aux = AuxRsaParams::Deserialize(pub.Get(kTagAux));
  PaillierPublicKey peer_pk = PaillierPublicKey::Deserialize(pub.Get(kTagPeerPaillier));
  AuxRsaParams peer_aux = AuxRsaParams::Deserialize(pub.Get(kTagPeerAux));
  pub.ExpectEnd();

  TlvReader sec(secret_part);
  Scalar x = Scalar::FromBytes(curve, sec.Get(kTagX));
  const Bytes d_bytes = sec.Get(kTagD);
  if (d_bytes.size() != 32) throw DecodeError("derivation secret must be 32 bytes");
  DerivationSecret d{};
  std::copy(d_bytes.begin(), d_bytes.end(), d.begin());
  PaillierSecretKey paillier = PaillierSecretKey::DeserializeSecret(sec.Get(kTagPaillierSecret));
  sec.ExpectEnd();

  if (!(paillier.public_key() == own_pk)) throw DecodeError("Paillier key pair mismatch");
  if (!(public_data.PublicKey() == y)) throw DecodeError("public key does not match commitments");
  if (!(Point::BaseMul(x) == public_data.SharePoint(role))) {
    throw DecodeError("secret share does not match its public share point");
  }
  const PartyId peer = role == PartyId::kP1 ? PartyId::kP2 : PartyId::kP1;
  Scalar omega = LagrangeWeight(curve, EvalPoint(role), EvalPoint(peer)) * x;
  return KeyShareRecord{config,         role,           std::move(x),       std::move(omega),
                        std::move(y),   d,              std::move(pk3),     std::move(public_data),
                        std::move(rec13), std::move(rec23), std::move(paillier), std::move(aux),
                        std::move(peer_pk), std::move(peer_aux)};
}

RecoveryMaterial RecoveryMaterial::FromPublic(ByteView public_part) {
  TlvReader pub(public_part);
  CurveConfig config;
  config.curve_id = static_cast<CurveId>(pub.GetU32(kTagCurve));
  config.hash_id = static_cast<HashId>(pub.GetU32(kTagHash));
  const Curve& curve = [&]() -> const Curve& {
    try {
      return config.curve();
    } catch (const std::exception&) {
      throw DecodeError("unknown curve id");
    }
  }();
  RoleFromByte(pub.GetU32(kTagRole));
  Point y = Point::FromBytes(curve, pub.Get(kTagPublicKey));
  Point pk3 = Point::FromBytes(curve, pub.Get(kTagRecoveryKey));
  KeygenPublicData public_data = KeygenPublicData::Deserialize(curve, pub.Get(kTagPublicData));
  Bytes rec13 = pub.Get(kTagRec13);
  Bytes rec23 = pub.Get(kTagRec23);
  if (!(public_data.PublicKey() == y)) throw DecodeError("public key does not match commitments");
  return RecoveryMaterial{config,           std::move(y),     std::move(pk3),
                          std::move(public_data), std::move(rec13), std::move(rec23)};
}

Scalar DerivationScalar(const CurveConfig& config, const DerivationSecret& d,
                        std::uint32_t index) {
  Bytes data(kDerivationTag.begin(), kDerivationTag.end());
  data.insert(data.end(), d.begin(), d.end());
  AppendU32Be(index, &data);
  return HashToScalar(config, data);
}

Point DerivePublicKey(const CurveConfig& config, const Point& y, const DerivationSecret& d,
                      std::uint32_t index) {
  return y + Point::BaseMul(DerivationScalar(config, d, index));
}

DerivationSecret DerivationSecretFromPoint(const Point& p) {
  const Bytes x = EncodeMpzFixed(p.X(), 32);
  DerivationSecret d{};
  std::copy(x.begin(), x.end(), d.begin());
  return d;
}

std::pair<PartyId, PartyId> PairingParties(Pairing pairing) {
  switch (pairing) {
    case Pairing::k12: return {PartyId::kP1, PartyId::kP2};
    case Pairing::k13: return {PartyId::kP1, PartyId::kP3};
    case Pairing::k23: return {PartyId::kP2, PartyId::kP3};
  }
  throw std::invalid_argument("unknown pairing");
}

Pairing PairingFromParties(PartyId a, PartyId b) {
  if (a > b) std::swap(a, b);
  if (a == PartyId::kP1 && b == PartyId::kP2) return Pairing::k12;
  if (a == PartyId::kP1 && b == PartyId::kP3) return Pairing::k13;
  if (a == PartyId::kP2 && b == PartyId::kP3) return Pairing::k23;
  throw std::invalid_argument("not a valid signing pair");
}

SigningShare BuildSigningShare(const CurveConfig& config, PartyId self, PartyId peer,
                               const Scalar& x_self, const Point& x_peer_point,
                               const Point& public_key, const PaillierSecretKey& paillier,
                               const AuxRsaParams& aux, const PaillierPublicKey& peer_paillier,
                               const AuxRsaParams& peer_aux,
                               const std::optional<DerivationSecret>& d,
                               std::optional<std::uint32_t> derive_index) {
  const Curve& curve = config.curve();
  Scalar h = Scalar::Zero(curve);
  if (derive_index) {
    if (!d) throw std::invalid_argument("key derivation requires the derivation secret");
    h = DerivationScalar(config, *d, *derive_index);
  }
  const Point h_point = Point::BaseMul(h);
  const Scalar lambda_self = LagrangeWeight(curve, EvalPoint(self), EvalPoint(peer));
  const Scalar lambda_peer = LagrangeWeight(curve, EvalPoint(peer), EvalPoint(self));
  return SigningShare{config,
                      self,
                      peer,
                      lambda_self * (x_self + h),
                      lambda_peer * (x_peer_point + h_point),
                      public_key + h_point,
                      paillier,
                      aux,
                      peer_paillier,
                      peer_aux};
}

SigningShare OrdinarySigningShare(const KeyShareRecord& record,
                                  std::optional<std::uint32_t> derive_index) {
  return BuildSigningShare(record.config, record.role, record.peer(), record.x,
                           record.public_data.SharePoint(record.peer()), record.public_key,
                           record.paillier, record.aux, record.peer_paillier, record.peer_aux,
                           record.derivation_secret, derive_index);
}

}  // namespace trecdsa
