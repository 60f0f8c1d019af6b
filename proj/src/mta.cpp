#include "trecdsa/mta.hpp"

#include "trecdsa/bigint.hpp"

namespace trecdsa {
namespace {

constexpr std::uint16_t kTagCiphertext = 1;
constexpr std::uint16_t kTagProof = 2;

template <typename Proof, typename Parse>
void ReadCiphertextAndProof(ByteView data, PaillierCiphertext* c, std::optional<Proof>* proof,
                            Parse parse) {
  TlvReader r(data);
  c->value = DecodeMpz(r.Get(kTagCiphertext));
  if (!r.AtEnd()) *proof = parse(r.Get(kTagProof));
  r.ExpectEnd();
}

}  // namespace

Bytes MtaInitMessage::Serialize() const {
  TlvWriter w;
  w.Put(kTagCiphertext, EncodeMpz(c.value));
  if (proof) w.Put(kTagProof, proof->Serialize());
  return w.Take();
}

MtaInitMessage MtaInitMessage::Deserialize(ByteView data) {
  MtaInitMessage m;
  ReadCiphertextAndProof(data, &m.c, &m.proof,
                         [](ByteView b) { return InitiatorRangeProof::Deserialize(b); });
  return m;
}

Bytes MtaResponseMessage::Serialize() const {
  TlvWriter w;
  w.Put(kTagCiphertext, EncodeMpz(c.value));
  if (proof) w.Put(kTagProof, proof->Serialize());
  return w.Take();
}

MtaResponseMessage MtaResponseMessage::Deserialize(const Curve& curve, ByteView data) {
  MtaResponseMessage m;
  ReadCiphertextAndProof(data, &m.c, &m.proof, [&curve](ByteView b) {
    return RespondentRangeProof::Deserialize(curve, b);
  });
  return m;
}

std::pair<MtaInitMessage, MtaInitiatorState> MtaInit(const Scalar& a,
                                                     const PaillierPublicKey& initiator_pk,
                                                     const AuxRsaParams& responder_aux,
                                                     ByteView context, const MtaOptions& options,
                                                     Rng& rng) {
  mpz_class r;
  MtaInitMessage msg{initiator_pk.Encrypt(a.value(), rng, &r), std::nullopt};
  if (options.range_proofs) {
    msg.proof = ProveInitiatorRange(a.curve(), initiator_pk, responder_aux, msg.c, a.value(), r,
                                    context, rng);
  }
  MtaInitiatorState state{a, msg.c};
  return {std::move(msg), std::move(state)};
}

MtaResponse MtaRespond(const Scalar& b, const MtaInitMessage& init,
                       const PaillierPublicKey& initiator_pk, const AuxRsaParams& responder_aux,
                       const AuxRsaParams& initiator_aux, const std::optional<Point>& b_point,
                       ByteView context, const MtaOptions& options, Rng& rng) {
  const Curve& curve = b.curve();
  if (!initiator_pk.IsValidCiphertext(init.c)) {
    throw ProtocolAbort(AbortCode::kMalformedMessage, "MtA initiator ciphertext is not a unit");
  }
  if (options.range_proofs &&
      (!init.proof || !VerifyInitiatorRange(*init.proof, curve, initiator_pk, responder_aux,
                                            init.c, context))) {
    throw ProtocolAbort(AbortCode::kRangeProofInitiator, "MtA initiator range proof rejected");
  }

  mpz_class r;
  const mpz_class beta_prime = rng.Below(initiator_pk.n());
  const PaillierCiphertext masked = initiator_pk.Encrypt(beta_prime, rng, &r);
  MtaResponseMessage msg{initiator_pk.Add(initiator_pk.ScalarMul(b.value(), init.c), masked),
                         std::nullopt};
  if (options.range_proofs) {
    msg.proof = ProveRespondentRange(curve, initiator_pk, initiator_aux, init.c, msg.c, b.value(),
                                     beta_prime, r, b_point, context, rng);
  }
  return MtaResponse{std::move(msg), -Scalar(curve, beta_prime)};
}

Scalar MtaFinalize(const MtaInitiatorState& state, const MtaResponseMessage& response,
                   const PaillierSecretKey& initiator_sk, const AuxRsaParams& initiator_aux,
                   const std::optional<Point>& b_point, ByteView context,
                   const MtaOptions& options) {
  const Curve& curve = state.a.curve();
  const PaillierPublicKey& pk = initiator_sk.public_key();
  if (!pk.IsValidCiphertext(response.c)) {
    throw ProtocolAbort(AbortCode::kMalformedMessage, "MtA response ciphertext is not a unit");
  }
  if (options.range_proofs &&
      (!response.proof || !VerifyRespondentRange(*response.proof, curve, pk, initiator_aux,
                                                 state.c, response.c, b_point, context))) {
    throw ProtocolAbort(AbortCode::kRangeProofRespondent, "MtA respondent range proof rejected");
  }
  return Scalar(curve, initiator_sk.Decrypt(response.c));
}

}  // namespace trecdsa
