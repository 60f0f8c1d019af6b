#include "trecdsa/protocol/sign.hpp"

#include "trecdsa/mta.hpp"
#include "trecdsa/zkp/schnorr.hpp"

namespace trecdsa {
namespace {

enum : std::uint16_t { kTagDigest = 1 };
enum : std::uint16_t { kTagGamma = 1, kTagOmega };
enum : std::uint16_t { kTagScalar = 1 };
enum : std::uint16_t { kTagOpening = 1, kTagProof };

Bytes DigestPayload(const Commitment& c) {
  TlvWriter w;
  w.Put(kTagDigest, c.digest);
  return w.Take();
}

Commitment ParseDigestPayload(ByteView payload) {
  TlvReader r(payload);
  const Bytes d = r.Get(kTagDigest);
  r.ExpectEnd();
  if (d.size() != 32) throw DecodeError("commitment digest must be 32 bytes");
  Commitment c;
  std::copy(d.begin(), d.end(), c.digest.begin());
  return c;
}

Bytes ScalarPayload(const Scalar& s) {
  TlvWriter w;
  w.Put(kTagScalar, s.ToBytes());
  return w.Take();
}

Scalar ParseScalarPayload(const Curve& curve, ByteView payload) {
  TlvReader r(payload);
  Scalar s = Scalar::FromBytes(curve, r.Get(kTagScalar));
  r.ExpectEnd();
  return s;
}

Bytes ConcatPoints(const Point& a, const Point& b) {
  Bytes out = a.ToBytes();
  AppendBytes(b.ToBytes(), &out);
  return out;
}

std::pair<Point, Point> SplitPoints(const Curve& curve, ByteView data) {
  if (data.size() != 2 * kPointBytes) throw DecodeError("expected two compressed points");
  return {Point::FromBytes(curve, data.subspan(0, kPointBytes)),
          Point::FromBytes(curve, data.subspan(kPointBytes))};
}

// Opens a commitment to a payload and decodes it, mapping every failure to
// `code`.
template <typename F>
auto OpenOrAbort(AbortCode code, std::string_view domain, const Commitment& com,
                 const Decommitment& dec, F&& decode) -> decltype(decode(Bytes{})) {
  const std::optional<Bytes> payload = VerifyCommitment(domain, com, dec);
  if (!payload) throw ProtocolAbort(code, "opening does not match commitment");
  try {
    return decode(*payload);
  } catch (const DecodeError& e) {
    throw ProtocolAbort(code, std::string("committed value malformed: ") + e.what());
  }
}

}  // namespace

struct SignParty::State {
  std::optional<Scalar> k;
  std::optional<Scalar> gamma;
  Decommitment g_opening;
  Commitment peer_g_commitment;

  std::optional<MtaInitiatorState> mta_gamma;
  std::optional<MtaInitiatorState> mta_omega;
  std::optional<Scalar> beta_gamma;  // from answering the peer's k_j gamma_i
  std::optional<Scalar> beta_omega;  // from answering the peer's k_j omega_i

  std::optional<Scalar> delta_share;
  std::optional<Scalar> sigma_share;
  std::optional<Scalar> delta;

  std::optional<Point> big_r;
  std::optional<Scalar> r;
  std::optional<Scalar> e;
  std::optional<Scalar> s_share;
  std::optional<Scalar> l;
  std::optional<Scalar> rho;
  std::optional<Point> w_share;
  std::optional<Point> z_share;
  Decommitment wz_opening;
  Commitment peer_wz_commitment;

  std::optional<Point> u_share;
  std::optional<Point> t_share;
  Decommitment ut_opening;
  Commitment peer_ut_commitment;
};

SignParty::SignParty(SigningShare share, const MtaOptions& mta, Bytes message,
                     const SessionId& session, Rng rng, std::size_t round_offset,
                     SignTestHooks hooks)
    : share_(std::move(share)),
      mta_(mta),
      message_(std::move(message)),
      session_(session),
      rng_(std::move(rng)),
      round_offset_(round_offset),
      hooks_(hooks),
      state_(std::make_unique<State>()) {
  if (share_.self == share_.peer) throw std::invalid_argument("signer paired with itself");
}

SignParty::~SignParty() = default;

Envelope SignParty::Broadcast(std::size_t local_round, MessageKind kind, Bytes payload) const {
  Envelope e;
  e.session_id = session_;
  e.sender = share_.self;
  e.recipient = PartyId::kBroadcast;
  e.round = static_cast<std::uint8_t>(local_round + round_offset_);
  e.kind = kind;
  e.payload = std::move(payload);
  return e;
}

Bytes SignParty::Context(std::string_view what, PartyId owner) const {
  Transcript t("trecdsa/sign/context");
  t.Append("session", session_)
      .Append("what", AsBytes(what))
      .AppendU32("owner", static_cast<std::uint32_t>(owner))
      .Append("Y", share_.public_key.ToBytes());
  const Digest d = t.Finish();
  return Bytes(d.begin(), d.end());
}

std::string SignParty::Domain(std::string_view what, PartyId owner) const {
  return "trecdsa/sign/" + std::string(what) + "/" + std::string(PartyName(owner)) + "/" +
         ToHex(session_);
}

std::vector<Envelope> SignParty::Step(std::size_t round, std::span<const Envelope> inbound) {
  if (round <= round_offset_ || round > round_offset_ + kRounds) {
    throw std::logic_error("signing round out of range");
  }
  const Inbox inbox(inbound, session_, share_.self);
  return Local(round - round_offset_, inbox);
}

std::vector<Envelope> SignParty::Local(std::size_t round, const Inbox& inbox) {
  const Curve& curve = share_.config.curve();
  const PartyId self = share_.self;
  const PartyId peer = share_.peer;
  State& s = *state_;

  switch (round) {
    case 1: {
      s.k = Scalar::RandomNonZero(curve, rng_);
      s.gamma = Scalar::RandomNonZero(curve, rng_);
      trace_.k = s.k;
      trace_.gamma = s.gamma;
      auto [com, dec] = Commit(Domain("G", self), Point::BaseMul(*s.gamma).ToBytes(), rng_);
      s.g_opening = std::move(dec);
      return {Broadcast(1, MessageKind::kSignCommit, DigestPayload(com))};
    }

    case 2: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignCommit);
      s.peer_g_commitment = ParseOrAbort("sign commit", [&] {
        return ParseDigestPayload(msg.payload);
      });
      auto [gamma_init, gamma_state] = MtaInit(*s.k, share_.paillier.public_key(),
                                               share_.peer_aux, Context("mta/gamma", self),
                                               mta_, rng_);
      auto [omega_init, omega_state] = MtaInit(*s.k, share_.paillier.public_key(),
                                               share_.peer_aux, Context("mta/omega", self),
                                               mta_, rng_);
      s.mta_gamma = std::move(gamma_state);
      s.mta_omega = std::move(omega_state);
      TlvWriter w;
      w.Put(kTagGamma, gamma_init.Serialize()).Put(kTagOmega, omega_init.Serialize());
      return {Broadcast(2, MessageKind::kSignMtaInit, w.Take())};
    }

    case 3: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignMtaInit);
      auto [gamma_init, omega_init] = ParseOrAbort("MtA init", [&] {
        TlvReader r(msg.payload);
        MtaInitMessage g = MtaInitMessage::Deserialize(r.Get(kTagGamma));
        MtaInitMessage o = MtaInitMessage::Deserialize(r.Get(kTagOmega));
        r.ExpectEnd();
        return std::make_pair(std::move(g), std::move(o));
      });
      MtaResponse gamma_resp =
          MtaRespond(*s.gamma, gamma_init, share_.peer_paillier, share_.aux, share_.peer_aux,
                     std::nullopt, Context("mta/gamma", peer), mta_, rng_);
      MtaResponse omega_resp =
          MtaRespond(share_.omega, omega_init, share_.peer_paillier, share_.aux, share_.peer_aux,
                     Point::BaseMul(share_.omega), Context("mta/omega", peer), mta_, rng_);
      s.beta_gamma = gamma_resp.beta;
      s.beta_omega = omega_resp.beta;
      TlvWriter w;
      w.Put(kTagGamma, gamma_resp.message.Serialize())
          .Put(kTagOmega, omega_resp.message.Serialize());
      return {Broadcast(3, MessageKind::kSignMtaResponse, w.Take())};
    }

    case 4: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignMtaResponse);
      auto [gamma_resp, omega_resp] = ParseOrAbort("MtA response", [&] {
        TlvReader r(msg.payload);
        MtaResponseMessage g = MtaResponseMessage::Deserialize(curve, r.Get(kTagGamma));
        MtaResponseMessage o = MtaResponseMessage::Deserialize(curve, r.Get(kTagOmega));
        r.ExpectEnd();
        return std::make_pair(std::move(g), std::move(o));
      });
      const Scalar alpha = MtaFinalize(*s.mta_gamma, gamma_resp, share_.paillier, share_.aux,
                                       std::nullopt, Context("mta/gamma", self), mta_);
      const Scalar mu = MtaFinalize(*s.mta_omega, omega_resp, share_.paillier, share_.aux,
                                    share_.peer_omega_point, Context("mta/omega", self), mta_);
      s.delta_share = *s.k * *s.gamma + alpha + *s.beta_gamma;
      s.sigma_share = *s.k * share_.omega + mu + *s.beta_omega;
      trace_.delta_share = s.delta_share;
      trace_.sigma_share = s.sigma_share;
      return {Broadcast(4, MessageKind::kSignDelta, ScalarPayload(*s.delta_share))};
    }

    case 5: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignDelta);
      const Scalar peer_delta =
          ParseOrAbort("delta", [&] { return ParseScalarPayload(curve, msg.payload); });
      s.delta = *s.delta_share + peer_delta;
      trace_.delta = s.delta;
      if (s.delta->IsZero()) {
        throw ProtocolAbort(AbortCode::kDegenerateNonce, "delta = 0");
      }
      TlvWriter w;
      w.Put(kTagOpening, s.g_opening.Serialize())
          .Put(kTagProof, SchnorrProve(*s.gamma, Point::BaseMul(*s.gamma),
                                       Context("gamma", self), rng_)
                              .Serialize());
      return {Broadcast(5, MessageKind::kSignDecommit, w.Take())};
    }

    case 6: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignDecommit);
      auto [opening, proof] = ParseOrAbort("sign decommit", [&] {
        TlvReader r(msg.payload);
        Decommitment d = Decommitment::Deserialize(r.Get(kTagOpening));
        SchnorrProof p = SchnorrProof::Deserialize(curve, r.Get(kTagProof));
        r.ExpectEnd();
        return std::make_pair(std::move(d), std::move(p));
      });
      const Point peer_g = OpenOrAbort(AbortCode::kSignDecommitment, Domain("G", peer),
                                       s.peer_g_commitment, opening,
                                       [&](const Bytes& b) { return Point::FromBytes(curve, b); });
      if (!SchnorrVerify(proof, peer_g, Context("gamma", peer))) {
        throw ProtocolAbort(AbortCode::kSchnorrProof, "peer proof for gamma_j rejected");
      }
      s.big_r = s.delta->Inverse() * (Point::BaseMul(*s.gamma) + peer_g);
      trace_.big_r = s.big_r;
      s.r = s.big_r->IsIdentity() ? Scalar::Zero(curve) : Scalar(curve, s.big_r->X());
      if (hooks_.force_zero_r) s.r = Scalar::Zero(curve);
      if (s.r->IsZero()) throw ProtocolAbort(AbortCode::kDegenerateNonce, "r = 0");

      s.e = HashToScalar(share_.config, message_);
      s.s_share = *s.e * *s.k + *s.r * *s.sigma_share;
      trace_.s_share = s.s_share;
      s.l = Scalar::Random(curve, rng_);
      s.rho = Scalar::Random(curve, rng_);
      const Scalar w_scalar =
          hooks_.corrupt_partial_signature ? Scalar::Random(curve, rng_) : *s.s_share;
      s.w_share = w_scalar * *s.big_r + Point::BaseMul(*s.l);
      s.z_share = Point::BaseMul(*s.rho);
      if (hooks_.corrupt_partial_signature) s.s_share = w_scalar;
      auto [com, dec] = Commit(Domain("WZ", self), ConcatPoints(*s.w_share, *s.z_share), rng_);
      s.wz_opening = std::move(dec);
      return {Broadcast(6, MessageKind::kSignCheckCommit, DigestPayload(com))};
    }

    case 7: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignCheckCommit);
      s.peer_wz_commitment = ParseOrAbort("check commit", [&] {
        return ParseDigestPayload(msg.payload);
      });
      TlvWriter w;
      w.Put(kTagOpening, s.wz_opening.Serialize())
          .Put(kTagProof, ProvePartialSignature(*s.big_r, *s.w_share, *s.z_share, *s.s_share,
                                                *s.l, *s.rho, Context("partial", self), rng_)
                              .Serialize());
      return {Broadcast(7, MessageKind::kSignCheckDecommit, w.Take())};
    }

    case 8: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignCheckDecommit);
      auto [opening, proof] = ParseOrAbort("check decommit", [&] {
        TlvReader r(msg.payload);
        Decommitment d = Decommitment::Deserialize(r.Get(kTagOpening));
        PartialSignatureProof p = PartialSignatureProof::Deserialize(curve, r.Get(kTagProof));
        r.ExpectEnd();
        return std::make_pair(std::move(d), std::move(p));
      });
      const auto [peer_w, peer_z] =
          OpenOrAbort(AbortCode::kCheckDecommitment, Domain("WZ", peer), s.peer_wz_commitment,
                      opening, [&](const Bytes& b) { return SplitPoints(curve, b); });
      if (!VerifyPartialSignature(proof, *s.big_r, peer_w, peer_z, Context("partial", peer))) {
        throw ProtocolAbort(AbortCode::kPartialSignatureProof, "peer proof for (s_j, l_j, rho_j)");
      }
      const Point w_total = -Point::BaseMul(*s.e) - *s.r * share_.public_key + *s.w_share + peer_w;
      const Point z_total = *s.z_share + peer_z;
      s.u_share = *s.rho * w_total;
      s.t_share = *s.l * z_total;
      auto [com, dec] = Commit(Domain("UT", self), ConcatPoints(*s.u_share, *s.t_share), rng_);
      s.ut_opening = std::move(dec);
      return {Broadcast(8, MessageKind::kSignCheckCommit2, DigestPayload(com))};
    }

    case 9: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignCheckCommit2);
      s.peer_ut_commitment = ParseOrAbort("check commit", [&] {
        return ParseDigestPayload(msg.payload);
      });
      TlvWriter w;
      w.Put(kTagOpening, s.ut_opening.Serialize());
      return {Broadcast(9, MessageKind::kSignCheckDecommit2, w.Take())};
    }

    case 10: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignCheckDecommit2);
      const Decommitment opening = ParseOrAbort("check decommit", [&] {
        TlvReader r(msg.payload);
        Decommitment d = Decommitment::Deserialize(r.Get(kTagOpening));
        r.ExpectEnd();
        return d;
      });
      const auto [peer_u, peer_t] =
          OpenOrAbort(AbortCode::kCheckDecommitment, Domain("UT", peer), s.peer_ut_commitment,
                      opening, [&](const Bytes& b) { return SplitPoints(curve, b); });
      if (!(*s.t_share + peer_t == *s.u_share + peer_u)) {
        throw ProtocolAbort(AbortCode::kCheckMismatch, "T_A + T_B != U_A + U_B");
      }
      return {Broadcast(10, MessageKind::kSignShare, ScalarPayload(*s.s_share))};
    }

    case 11: {
      const Envelope& msg = inbox.Expect(peer, MessageKind::kSignShare);
      const Scalar peer_s =
          ParseOrAbort("signature share", [&] { return ParseScalarPayload(curve, msg.payload); });
      const Scalar total = *s.s_share + peer_s;
      if (total.IsZero()) throw ProtocolAbort(AbortCode::kDegenerateNonce, "s = 0");
      Signature sig{*s.r, total};
      if (!EcdsaVerify(share_.config, share_.public_key, message_, sig)) {
        throw ProtocolAbort(AbortCode::kInvalidSignature, "combined signature does not verify");
      }
      result_.emplace(std::move(sig));
      return {};
    }
  }
  throw std::logic_error("unreachable signing round");
}

}  // namespace trecdsa
