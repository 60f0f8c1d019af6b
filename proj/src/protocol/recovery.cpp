#include "trecdsa/protocol/recovery.hpp"

#include "trecdsa/protocol/keygen.hpp"
#include "trecdsa/zkp/factorization.hpp"
#include "trecdsa/zkp/schnorr.hpp"

namespace trecdsa {
namespace {

enum : std::uint16_t {
  kTagPublicKey = 1,
  kTagRec13,
  kTagRec23,
  kTagPublicData,
  kTagPaillier,
  kTagAux,
};
enum : std::uint16_t { kTagSchnorr = 1, kTagFactorization };

const std::optional<Signature> kNoSignature;

Envelope Message(const SessionId& session, PartyId from, PartyId to, std::uint8_t round,
                 MessageKind kind, Bytes payload) {
  Envelope e;
  e.session_id = session;
  e.sender = from;
  e.recipient = to;
  e.round = round;
  e.kind = kind;
  e.payload = std::move(payload);
  return e;
}

Bytes HelloPayload(const PaillierPublicKey& pk, const AuxRsaParams& aux) {
  TlvWriter w;
  w.Put(kTagPaillier, pk.Serialize()).Put(kTagAux, aux.Serialize());
  return w.Take();
}

// Parses a Paillier key and auxiliary parameters from `r` and applies the
// minimum sizes of `params`.
std::pair<PaillierPublicKey, AuxRsaParams> ReadPeerKeys(TlvReader& r,
                                                        const ProtocolParams& params) {
  PaillierPublicKey pk;
  AuxRsaParams aux;
  try {
    pk = PaillierPublicKey::Deserialize(r.Get(kTagPaillier));
  } catch (const std::exception& e) {
    throw ProtocolAbort(AbortCode::kPaillierKeyRejected, e.what());
  }
  try {
    aux = AuxRsaParams::Deserialize(r.Get(kTagAux));
  } catch (const std::exception& e) {
    throw ProtocolAbort(AbortCode::kAuxParamsRejected, e.what());
  }
  if (pk.bits() < params.paillier_bits) {
    throw ProtocolAbort(AbortCode::kPaillierKeyRejected, "peer Paillier modulus too small");
  }
  if (aux.bits() < params.aux_bits) {
    throw ProtocolAbort(AbortCode::kAuxParamsRejected, "peer auxiliary modulus too small");
  }
  return {std::move(pk), std::move(aux)};
}

Bytes ProofPayload(const Scalar& x, const Point& x_point, const PaillierSecretKey& paillier,
                   ByteView schnorr_ctx, ByteView factorization_ctx, Rng& rng) {
  TlvWriter w;
  w.Put(kTagSchnorr, SchnorrProve(x, x_point, schnorr_ctx, rng).Serialize())
      .Put(kTagFactorization,
           ProveFactorization(paillier.public_key().n(), paillier.Phi(), factorization_ctx, rng)
               .Serialize());
  return w.Take();
}

void CheckProofPayload(const Curve& curve, ByteView payload, const Point& x_point,
                       const mpz_class& n, ByteView schnorr_ctx, ByteView factorization_ctx) {
  auto [schnorr, factorization] = ParseOrAbort("recovery proof", [&] {
    TlvReader r(payload);
    SchnorrProof s = SchnorrProof::Deserialize(curve, r.Get(kTagSchnorr));
    FactorizationProof f = FactorizationProof::Deserialize(r.Get(kTagFactorization));
    r.ExpectEnd();
    return std::make_pair(std::move(s), std::move(f));
  });
  if (!SchnorrVerify(schnorr, x_point, schnorr_ctx)) {
    throw ProtocolAbort(AbortCode::kSchnorrProof, "peer proof of its share rejected");
  }
  if (!VerifyFactorization(factorization, n, factorization_ctx)) {
    throw ProtocolAbort(AbortCode::kFactorizationProof, "peer factorization proof rejected");
  }
}

Bytes RecoveryContext(const SessionId& session, ByteView bundle, ByteView hello,
                      std::string_view what, PartyId prover) {
  Transcript t("trecdsa/recovery/binding");
  t.Append("session", session)
      .Append("what", AsBytes(what))
      .AppendU32("prover", static_cast<std::uint32_t>(prover))
      .Append("bundle", bundle)
      .Append("hello", hello);
  const Digest d = t.Finish();
  return Bytes(d.begin(), d.end());
}

std::pair<Scalar, Scalar> OpenBlob(const RecoveryKeyPair& keys, ByteView blob, PartyId dealer) {
  const Curve& curve = keys.secret.curve();
  const std::optional<Bytes> plain =
      OpenRecoveryBlob(keys.secret, blob, RecoveryBlobAssociatedData(dealer));
  if (!plain || plain->size() != 2 * kScalarBytes) {
    throw ProtocolAbort(AbortCode::kRecoveryDecrypt,
                        "cannot open rec blob of " + std::string(PartyName(dealer)));
  }
  try {
    return {Scalar::FromBytes(curve, ByteView(*plain).subspan(0, kScalarBytes)),
            Scalar::FromBytes(curve, ByteView(*plain).subspan(kScalarBytes))};
  } catch (const DecodeError&) {
    throw ProtocolAbort(AbortCode::kRecoveryDecrypt, "rec blob holds out-of-range scalars");
  }
}

}  // namespace

RecoveredShare RecoverP3Share(const RecoveryKeyPair& keys, const Point& public_key,
                              const KeygenPublicData& public_data, ByteView rec13,
                              ByteView rec23) {
  const Curve& curve = keys.secret.curve();
  const auto [sigma13, sigma31] = OpenBlob(keys, rec13, PartyId::kP1);
  const auto [sigma23, sigma32] = OpenBlob(keys, rec23, PartyId::kP2);
  const std::uint32_t p3 = EvalPoint(PartyId::kP3);
  if (!VssVerifyShare(public_data.f1, p3, sigma13) ||
      !VssVerifyShare(public_data.f2, p3, sigma23) ||
      !(Point::BaseMul(sigma31) == public_data.sigma31_point) ||
      !(Point::BaseMul(sigma32) == public_data.sigma32_point)) {
    throw ProtocolAbort(AbortCode::kRecoveryInconsistent,
                        "recovery material does not match the keygen commitments");
  }
  if (!(public_data.PublicKey() == public_key)) {
    throw ProtocolAbort(AbortCode::kRecoveryInconsistent,
                        "public key does not match the keygen commitments");
  }
  Scalar x3 = sigma13 + sigma23 + Scalar(curve, 2L) * sigma31 - sigma32;
  const Point d_point = sigma23 * public_data.f2.ShareImage(EvalPoint(PartyId::kP1));
  return RecoveredShare{std::move(x3), public_key, DerivationSecretFromPoint(d_point),
                        public_data};
}

RecoveryOnlineParty::RecoveryOnlineParty(KeyShareRecord record, const ProtocolParams& params,
                                         RecoveryRequest request, const SessionId& session,
                                         Rng rng, SignTestHooks hooks)
    : record_(std::move(record)),
      params_(params),
      request_(std::move(request)),
      session_(session),
      rng_(std::move(rng)),
      hooks_(hooks) {}

RecoveryOnlineParty::~RecoveryOnlineParty() = default;

const std::optional<Signature>& RecoveryOnlineParty::result() const {
  return signer_ ? signer_->result() : kNoSignature;
}

Bytes RecoveryOnlineParty::Context(std::string_view what, PartyId prover) const {
  return RecoveryContext(session_, bundle_, hello_, what, prover);
}

std::vector<Envelope> RecoveryOnlineParty::Step(std::size_t round,
                                                std::span<const Envelope> inbound) {
  const PartyId self = record_.role;
  const Curve& curve = record_.config.curve();
  const Inbox inbox(inbound, session_, self);
  const auto round_byte = static_cast<std::uint8_t>(round);
  if (round == 1) {
    TlvWriter w;
    w.Put(kTagPublicKey, record_.public_key.ToBytes())
        .Put(kTagRec13, record_.rec13)
        .Put(kTagRec23, record_.rec23)
        .Put(kTagPublicData, record_.public_data.Serialize())
        .Put(kTagPaillier, record_.paillier.public_key().Serialize())
        .Put(kTagAux, record_.aux.Serialize());
    bundle_ = w.Take();
    return {Message(session_, self, PartyId::kP3, round_byte, MessageKind::kRecoveryBundle,
                    bundle_)};
  }
  if (round == 2) {
    const Envelope& msg = inbox.Expect(PartyId::kP3, MessageKind::kRecoveryHello);
    hello_ = msg.payload;
    std::tie(p3_paillier_, p3_aux_) = ParseOrAbort("recovery hello", [&] {
      TlvReader r(hello_);
      auto keys = ReadPeerKeys(r, params_);
      r.ExpectEnd();
      return keys;
    });
    return {Message(session_, self, PartyId::kP3, round_byte, MessageKind::kRecoveryProof,
                    ProofPayload(record_.x, record_.public_data.SharePoint(self),
                                 record_.paillier, Context("schnorr", self),
                                 Context("factorization", self), rng_))};
  }
  if (round == 3) {
    const Envelope& msg = inbox.Expect(PartyId::kP3, MessageKind::kRecoveryProof);
    const Point x3_point = record_.public_data.SharePoint(PartyId::kP3);
    CheckProofPayload(curve, msg.payload, x3_point, p3_paillier_.n(),
                      Context("schnorr", PartyId::kP3), Context("factorization", PartyId::kP3));
    SigningShare share =
        BuildSigningShare(record_.config, self, PartyId::kP3, record_.x, x3_point,
                          record_.public_key, record_.paillier, record_.aux, p3_paillier_,
                          p3_aux_, record_.derivation_secret, request_.derive_index);
    signer_ = std::make_unique<SignParty>(std::move(share), params_.mta, request_.message,
                                          session_, rng_.Fork("sign"), 2, hooks_);
    return signer_->Step(round, {});
  }
  if (!signer_) throw std::logic_error("recovery signing not started");
  return signer_->Step(round, inbound);
}

RecoveryP3Party::RecoveryP3Party(RecoveryKeyPair keys, PartyId online_peer,
                                 const ProtocolParams& params, RecoveryRequest request,
                                 const SessionId& session, Rng rng, SignTestHooks hooks)
    : keys_(std::move(keys)),
      peer_(online_peer),
      params_(params),
      request_(std::move(request)),
      session_(session),
      rng_(std::move(rng)),
      hooks_(hooks) {
  if (peer_ != PartyId::kP1 && peer_ != PartyId::kP2) {
    throw std::invalid_argument("P3 recovers with P1 or P2");
  }
}

RecoveryP3Party::~RecoveryP3Party() = default;

const std::optional<Signature>& RecoveryP3Party::result() const {
  return signer_ ? signer_->result() : kNoSignature;
}

Bytes RecoveryP3Party::Context(std::string_view what, PartyId prover) const {
  return RecoveryContext(session_, bundle_, hello_, what, prover);
}

std::vector<Envelope> RecoveryP3Party::Step(std::size_t round,
                                            std::span<const Envelope> inbound) {
  const Curve& curve = params_.curve.curve();
  const Inbox inbox(inbound, session_, PartyId::kP3);
  const auto round_byte = static_cast<std::uint8_t>(round);
  if (round == 1) {
    paillier_ = GeneratePaillierKey(params_.paillier_bits, rng_);
    aux_ = GenerateAuxRsaParams(params_.aux_bits, rng_);
    hello_ = HelloPayload(paillier_.public_key(), aux_);
    return {Message(session_, PartyId::kP3, peer_, round_byte, MessageKind::kRecoveryHello,
                    hello_)};
  }
  if (round == 2) {
    const Envelope& msg = inbox.Expect(peer_, MessageKind::kRecoveryBundle);
    bundle_ = msg.payload;
    struct Bundle {
      Point y;
      Bytes rec13;
      Bytes rec23;
      KeygenPublicData public_data;
      PaillierPublicKey paillier;
      AuxRsaParams aux;
    };
    Bundle b = ParseOrAbort("recovery bundle", [&] {
      TlvReader r(bundle_);
      Point y = Point::FromBytes(curve, r.Get(kTagPublicKey));
      Bytes rec13 = r.Get(kTagRec13);
      Bytes rec23 = r.Get(kTagRec23);
      KeygenPublicData pd = KeygenPublicData::Deserialize(curve, r.Get(kTagPublicData));
      auto [pk, aux] = ReadPeerKeys(r, params_);
      r.ExpectEnd();
      return Bundle{std::move(y), std::move(rec13), std::move(rec23), std::move(pd),
                    std::move(pk), std::move(aux)};
    });
    if (b.paillier.n() == paillier_.public_key().n() || b.aux.m == aux_.m) {
      throw ProtocolAbort(AbortCode::kPaillierKeyRejected, "peer reuses P3's modulus");
    }
    peer_paillier_ = std::move(b.paillier);
    peer_aux_ = std::move(b.aux);
    recovered_ = RecoverP3Share(keys_, b.y, b.public_data, b.rec13, b.rec23);
    return {Message(session_, PartyId::kP3, peer_, round_byte, MessageKind::kRecoveryProof,
                    ProofPayload(recovered_->x3, recovered_->public_data.SharePoint(PartyId::kP3),
                                 paillier_, Context("schnorr", PartyId::kP3),
                                 Context("factorization", PartyId::kP3), rng_))};
  }
  if (round == 3) {
    const Envelope& msg = inbox.Expect(peer_, MessageKind::kRecoveryProof);
    const Point peer_point = recovered_->public_data.SharePoint(peer_);
    CheckProofPayload(curve, msg.payload, peer_point, peer_paillier_.n(),
                      Context("schnorr", peer_), Context("factorization", peer_));
    SigningShare share = BuildSigningShare(
        params_.curve, PartyId::kP3, peer_, recovered_->x3, peer_point, recovered_->public_key,
        paillier_, aux_, peer_paillier_, peer_aux_, recovered_->derivation_secret,
        request_.derive_index);
    signer_ = std::make_unique<SignParty>(std::move(share), params_.mta, request_.message,
                                          session_, rng_.Fork("sign"), 2, hooks_);
    return signer_->Step(round, {});
  }
  if (!signer_) throw std::logic_error("recovery signing not started");
  return signer_->Step(round, inbound);
}

}  // namespace trecdsa
