#include "trecdsa/protocol/keygen.hpp"

#include "trecdsa/bigint.hpp"
#include "trecdsa/protocol/recovery_box.hpp"
#include "trecdsa/zkp/factorization.hpp"
#include "trecdsa/zkp/schnorr.hpp"

namespace trecdsa {
namespace {

enum : std::uint16_t { kTagKgc = 1, kTagKgcs, kTagPaillier, kTagAux };
enum : std::uint16_t { kTagKgd = 1, kTagKgds, kTagVss, kTagRec };
enum : std::uint16_t { kTagShare = 1 };
enum : std::uint16_t { kTagSchnorr = 1, kTagFactorization };

std::string CommitDomain(std::string_view what, PartyId dealer, const SessionId& session) {
  return "trecdsa/keygen/" + std::string(what) + "/" + std::string(PartyName(dealer)) + "/" +
         ToHex(session);
}

Commitment ReadDigest(ByteView bytes) {
  if (bytes.size() != 32) throw DecodeError("commitment digest must be 32 bytes");
  Commitment c;
  std::copy(bytes.begin(), bytes.end(), c.digest.begin());
  return c;
}

Point OpenPoint(const Curve& curve, std::string_view domain, const Commitment& com,
                const Decommitment& dec) {
  const std::optional<Bytes> payload = VerifyCommitment(domain, com, dec);
  if (!payload) {
    throw ProtocolAbort(AbortCode::kKeygenDecommitment, "opening does not match commitment");
  }
  try {
    return Point::FromBytes(curve, *payload);
  } catch (const DecodeError&) {
    throw ProtocolAbort(AbortCode::kKeygenDecommitment, "committed value is not a point");
  }
}

}  // namespace

Bytes RecoveryBlobAssociatedData(PartyId dealer) {
  Bytes ad(AsBytes("trecdsa/rec/").begin(), AsBytes("trecdsa/rec/").end());
  ad.push_back(static_cast<std::uint8_t>(dealer));
  return ad;
}

struct KeygenParty::State {
  // Own secrets.
  std::optional<Scalar> u;
  std::optional<Scalar> sigma3;
  std::optional<VssDealing> dealing;
  PaillierSecretKey paillier;
  AuxRsaParams aux;
  Decommitment kgd;
  Decommitment kgds;
  Bytes own_rec;

  // Transcript pieces bound into the proof contexts.
  Bytes round1[2];
  Bytes round2[2];

  // Peer data.
  Commitment peer_kgc;
  Commitment peer_kgcs;
  PaillierPublicKey peer_paillier;
  AuxRsaParams peer_aux;
  std::optional<VssCommitments> peer_vss;
  std::optional<Point> peer_sigma3_point;
  std::optional<Scalar> peer_share;
  Bytes peer_rec;

  std::optional<Scalar> x;
  std::optional<KeygenPublicData> public_data;
};

KeygenParty::KeygenParty(PartyId role, const ProtocolParams& params, const Point& recovery_key,
                         const SessionId& session, Rng rng)
    : role_(role),
      peer_(role == PartyId::kP1 ? PartyId::kP2 : PartyId::kP1),
      params_(params),
      recovery_key_(recovery_key),
      session_(session),
      rng_(std::move(rng)),
      state_(std::make_unique<State>()) {
  if (role != PartyId::kP1 && role != PartyId::kP2) {
    throw std::invalid_argument("key generation runs between P1 and P2");
  }
}

KeygenParty::~KeygenParty() = default;

Envelope KeygenParty::Broadcast(std::uint8_t round, MessageKind kind, Bytes payload) const {
  Envelope e;
  e.session_id = session_;
  e.sender = role_;
  e.recipient = PartyId::kBroadcast;
  e.round = round;
  e.kind = kind;
  e.payload = std::move(payload);
  return e;
}

std::vector<Envelope> KeygenParty::Step(std::size_t round, std::span<const Envelope> inbound) {
  const Inbox inbox(inbound, session_, role_);
  switch (round) {
    case 1: return Round1();
    case 2: return Round2(inbox);
    case 3: return Round3(inbox);
    case 4: Finish(inbox); return {};
    default: throw std::logic_error("keygen has four rounds");
  }
}

std::vector<Envelope> KeygenParty::Round1() {
  const Curve& curve = params_.curve.curve();
  State& s = *state_;
  s.u = Scalar::Random(curve, rng_);
  s.sigma3 = Scalar::Random(curve, rng_);
  s.paillier = GeneratePaillierKey(params_.paillier_bits, rng_);
  s.aux = GenerateAuxRsaParams(params_.aux_bits, rng_);

  auto [kgc, kgd] =
      Commit(CommitDomain("u", role_, session_), Point::BaseMul(*s.u).ToBytes(), rng_);
  auto [kgcs, kgds] =
      Commit(CommitDomain("sigma3", role_, session_), Point::BaseMul(*s.sigma3).ToBytes(), rng_);
  s.kgd = std::move(kgd);
  s.kgds = std::move(kgds);

  TlvWriter w;
  w.Put(kTagKgc, kgc.digest)
      .Put(kTagKgcs, kgcs.digest)
      .Put(kTagPaillier, s.paillier.public_key().Serialize())
      .Put(kTagAux, s.aux.Serialize());
  s.round1[static_cast<int>(role_) - 1] = w.bytes();
  return {Broadcast(1, MessageKind::kKeygenCommit, w.Take())};
}

std::vector<Envelope> KeygenParty::Round2(const Inbox& inbox) {
  State& s = *state_;
  const Envelope& msg = inbox.Expect(peer_, MessageKind::kKeygenCommit);
  s.round1[static_cast<int>(peer_) - 1] = msg.payload;
  ParseOrAbort("keygen commit", [&] {
    TlvReader r(msg.payload);
    s.peer_kgc = ReadDigest(r.Get(kTagKgc));
    s.peer_kgcs = ReadDigest(r.Get(kTagKgcs));
    const Bytes pk = r.Get(kTagPaillier);
    const Bytes aux = r.Get(kTagAux);
    r.ExpectEnd();
    try {
      s.peer_paillier = PaillierPublicKey::Deserialize(pk);
    } catch (const std::exception& e) {
      throw ProtocolAbort(AbortCode::kPaillierKeyRejected, e.what());
    }
    try {
      s.peer_aux = AuxRsaParams::Deserialize(aux);
    } catch (const std::exception& e) {
      throw ProtocolAbort(AbortCode::kAuxParamsRejected, e.what());
    }
  });
  if (s.peer_paillier.bits() < params_.paillier_bits ||
      s.peer_paillier.n() == s.paillier.public_key().n()) {
    throw ProtocolAbort(AbortCode::kPaillierKeyRejected, "peer Paillier modulus rejected");
  }
  if (s.peer_aux.bits() < params_.aux_bits || s.peer_aux.m == s.aux.m) {
    throw ProtocolAbort(AbortCode::kAuxParamsRejected, "peer auxiliary modulus rejected");
  }

  s.dealing = VssDeal(*s.u, rng_);
  const Scalar& own_for_p3 = s.dealing->ShareAt(EvalPoint(PartyId::kP3));
  Bytes rec_plain = own_for_p3.ToBytes();
  AppendBytes(s.sigma3->ToBytes(), &rec_plain);
  s.own_rec = SealForRecovery(recovery_key_, rec_plain, RecoveryBlobAssociatedData(role_), rng_);

  TlvWriter w;
  w.Put(kTagKgd, s.kgd.Serialize())
      .Put(kTagKgds, s.kgds.Serialize())
      .Put(kTagVss, s.dealing->commitments.Serialize())
      .Put(kTagRec, s.own_rec);
  s.round2[static_cast<int>(role_) - 1] = w.bytes();

  Envelope share;
  share.session_id = session_;
  share.sender = role_;
  share.recipient = peer_;
  share.round = 2;
  share.kind = MessageKind::kKeygenShare;
  TlvWriter sw;
  sw.Put(kTagShare, s.dealing->ShareAt(EvalPoint(peer_)).ToBytes());
  share.payload = sw.Take();
  return {Broadcast(2, MessageKind::kKeygenDecommit, w.Take()), std::move(share)};
}

std::vector<Envelope> KeygenParty::Round3(const Inbox& inbox) {
  const Curve& curve = params_.curve.curve();
  State& s = *state_;
  const Envelope& dec = inbox.Expect(peer_, MessageKind::kKeygenDecommit);
  const Envelope& share = inbox.Expect(peer_, MessageKind::kKeygenShare);
  s.round2[static_cast<int>(peer_) - 1] = dec.payload;

  Decommitment kgd;
  Decommitment kgds;
  ParseOrAbort("keygen decommit", [&] {
    TlvReader r(dec.payload);
    kgd = Decommitment::Deserialize(r.Get(kTagKgd));
    kgds = Decommitment::Deserialize(r.Get(kTagKgds));
    s.peer_vss = VssCommitments::Deserialize(curve, r.Get(kTagVss));
    s.peer_rec = r.Get(kTagRec);
    r.ExpectEnd();
    TlvReader sr(share.payload);
    s.peer_share = Scalar::FromBytes(curve, sr.Get(kTagShare));
    sr.ExpectEnd();
  });

  const Point peer_u_point =
      OpenPoint(curve, CommitDomain("u", peer_, session_), s.peer_kgc, kgd);
  s.peer_sigma3_point =
      OpenPoint(curve, CommitDomain("sigma3", peer_, session_), s.peer_kgcs, kgds);
  if (!(peer_u_point == s.peer_vss->c0)) {
    throw ProtocolAbort(AbortCode::kVssShare, "VSS constant term differs from committed u B");
  }
  if (!VssVerifyShare(*s.peer_vss, EvalPoint(role_), *s.peer_share)) {
    throw ProtocolAbort(AbortCode::kVssShare, "peer share fails Feldman verification");
  }

  const VssCommitments& own_vss = s.dealing->commitments;
  const Point own_sigma3_point = Point::BaseMul(*s.sigma3);
  s.public_data = role_ == PartyId::kP1
                      ? KeygenPublicData{own_vss, *s.peer_vss, own_sigma3_point,
                                         *s.peer_sigma3_point}
                      : KeygenPublicData{*s.peer_vss, own_vss, *s.peer_sigma3_point,
                                         own_sigma3_point};
  s.x = s.dealing->ShareAt(EvalPoint(role_)) + *s.peer_share + *s.sigma3;

  TlvWriter w;
  w.Put(kTagSchnorr, SchnorrProve(*s.x, s.public_data->SharePoint(role_),
                                  BindingContext("schnorr", role_), rng_)
                         .Serialize())
      .Put(kTagFactorization,
           ProveFactorization(s.paillier.public_key().n(), s.paillier.Phi(),
                              BindingContext("factorization", role_), rng_)
               .Serialize());
  return {Broadcast(3, MessageKind::kKeygenProof, w.Take())};
}

Bytes KeygenParty::BindingContext(std::string_view what, PartyId prover) const {
  Transcript t("trecdsa/keygen/binding");
  t.Append("session", session_)
      .Append("what", AsBytes(what))
      .AppendU32("prover", static_cast<std::uint32_t>(prover))
      .Append("r1/P1", state_->round1[0])
      .Append("r1/P2", state_->round1[1])
      .Append("r2/P1", state_->round2[0])
      .Append("r2/P2", state_->round2[1]);
  const Digest d = t.Finish();
  return Bytes(d.begin(), d.end());
}

void KeygenParty::Finish(const Inbox& inbox) {
  const Curve& curve = params_.curve.curve();
  State& s = *state_;
  const Envelope& msg = inbox.Expect(peer_, MessageKind::kKeygenProof);
  SchnorrProof schnorr{Point(curve), Scalar::Zero(curve), Scalar::Zero(curve)};
  FactorizationProof factorization;
  ParseOrAbort("keygen proof", [&] {
    TlvReader r(msg.payload);
    schnorr = SchnorrProof::Deserialize(curve, r.Get(kTagSchnorr));
    factorization = FactorizationProof::Deserialize(r.Get(kTagFactorization));
    r.ExpectEnd();
  });
  if (!SchnorrVerify(schnorr, s.public_data->SharePoint(peer_),
                     BindingContext("schnorr", peer_))) {
    throw ProtocolAbort(AbortCode::kSchnorrProof, "peer proof of x_j rejected");
  }
  if (!VerifyFactorization(factorization, s.peer_paillier.n(),
                           BindingContext("factorization", peer_))) {
    throw ProtocolAbort(AbortCode::kFactorizationProof, "peer factorization proof rejected");
  }

  // d = sigma_{2,1} sigma_{2,3} B. P1 holds sigma_{2,1} (the share P2 sent)
  // and sees sigma_{2,3} B = f2(1) B; P2 holds f2(1) and sees f2(2) B.
  const Point d_point =
      role_ == PartyId::kP1
          ? *s.peer_share * s.public_data->f2.ShareImage(EvalPoint(PartyId::kP3))
          : s.dealing->ShareAt(EvalPoint(PartyId::kP3)) *
                s.public_data->f2.ShareImage(EvalPoint(PartyId::kP1));

  const Scalar omega = LagrangeWeight(curve, EvalPoint(role_), EvalPoint(peer_)) * *s.x;
  result_.emplace(KeyShareRecord{
      params_.curve, role_, *s.x, omega, s.public_data->PublicKey(),
      DerivationSecretFromPoint(d_point), recovery_key_, *s.public_data,
      role_ == PartyId::kP1 ? s.own_rec : s.peer_rec,
      role_ == PartyId::kP1 ? s.peer_rec : s.own_rec, s.paillier, s.aux, s.peer_paillier,
      s.peer_aux});
}

}  // namespace trecdsa
