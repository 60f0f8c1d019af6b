#pragma once

// Signing with P3 when one of P1, P2 is unavailable.
//
//   1. the online party sends P3 the public key, both recovery blobs, the
//      keygen commitments and its Paillier key and auxiliary parameters; P3
//      answers with a fresh Paillier key and auxiliary parameters
//   2. P3 decrypts the blobs, checks them against the commitments and
//      derives x_3 and d; both sides prove knowledge of their x and of the
//      factorization of their Paillier modulus
//   3+. two-party signing with the pairing's Lagrange weights

#include <memory>
#include <optional>

#include "trecdsa/protocol/key_share.hpp"
#include "trecdsa/protocol/params.hpp"
#include "trecdsa/protocol/recovery_box.hpp"
#include "trecdsa/protocol/sign.hpp"

namespace trecdsa {

struct RecoveryRequest {
  Bytes message;
  std::optional<std::uint32_t> derive_index;
};

/// P1 or P2 in a recovery session.
class RecoveryOnlineParty : public Party {
 public:
  RecoveryOnlineParty(KeyShareRecord record, const ProtocolParams& params,
                      RecoveryRequest request, const SessionId& session, Rng rng,
                      SignTestHooks hooks = {});
  ~RecoveryOnlineParty() override;

  PartyId id() const override { return record_.role; }
  std::size_t round_count() const override { return 2 + SignParty::kRounds; }
  std::vector<Envelope> Step(std::size_t round, std::span<const Envelope> inbound) override;

  const std::optional<Signature>& result() const;
  const SignParty* signer() const { return signer_.get(); }

 private:
  Bytes Context(std::string_view what, PartyId prover) const;

  KeyShareRecord record_;
  ProtocolParams params_;
  RecoveryRequest request_;
  SessionId session_;
  Rng rng_;
  SignTestHooks hooks_;
  Bytes bundle_;
  Bytes hello_;
  PaillierPublicKey p3_paillier_;
  AuxRsaParams p3_aux_;
  std::unique_ptr<SignParty> signer_;
};

/// What P3 reconstructs from the bundle and the two blobs.
struct RecoveredShare {
  Scalar x3;
  Point public_key;
  DerivationSecret derivation_secret;
  KeygenPublicData public_data;
};

/// Decrypts rec_{1,3} and rec_{2,3} and checks them against the public
/// keygen data. Throws ProtocolAbort (kRecoveryDecrypt or
/// kRecoveryInconsistent).
RecoveredShare RecoverP3Share(const RecoveryKeyPair& keys, const Point& public_key,
                              const KeygenPublicData& public_data, ByteView rec13,
                              ByteView rec23);

class RecoveryP3Party : public Party {
 public:
  RecoveryP3Party(RecoveryKeyPair keys, PartyId online_peer, const ProtocolParams& params,
                  RecoveryRequest request, const SessionId& session, Rng rng,
                  SignTestHooks hooks = {});
  ~RecoveryP3Party() override;

  PartyId id() const override { return PartyId::kP3; }
  std::size_t round_count() const override { return 2 + SignParty::kRounds; }
  std::vector<Envelope> Step(std::size_t round, std::span<const Envelope> inbound) override;

  const std::optional<Signature>& result() const;
  const SignParty* signer() const { return signer_.get(); }
  const std::optional<RecoveredShare>& recovered() const { return recovered_; }

 private:
  Bytes Context(std::string_view what, PartyId prover) const;

  RecoveryKeyPair keys_;
  PartyId peer_;
  ProtocolParams params_;
  RecoveryRequest request_;
  SessionId session_;
  Rng rng_;
  SignTestHooks hooks_;
  Bytes bundle_;
  Bytes hello_;
  PaillierSecretKey paillier_;
  AuxRsaParams aux_;
  PaillierPublicKey peer_paillier_;
  AuxRsaParams peer_aux_;
  std::optional<RecoveredShare> recovered_;
  std::unique_ptr<SignParty> signer_;
};

}  // namespace trecdsa
