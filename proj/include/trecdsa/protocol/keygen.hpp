#pragma once

// Distributed key generation between P1 and P2 with P3 offline. Each online
// party P_i deals a degree-1 polynomial f_i(X) = u_i + m_i X and also picks
// sigma_{3,i}, its share of a virtual third dealer's polynomial. The third
// party only ever receives rec_{i,3}, an encryption of (sigma_{i,3},
// sigma_{3,i}) under pk_3.
//
// Rounds:
//   1. broadcast commitments to u_i B and sigma_{3,i} B, Paillier key and
//      auxiliary RSA parameters
//   2. broadcast openings, VSS commitments and rec_{i,3}; send sigma_{i,j}
//      privately to the peer
//   3. broadcast a Schnorr proof for x_i and a factorization proof for N_i
//   4. verify and finish (no messages)

#include <memory>
#include <optional>

#include "trecdsa/protocol/key_share.hpp"
#include "trecdsa/protocol/message.hpp"
#include "trecdsa/protocol/params.hpp"
#include "trecdsa/zkp/commitment.hpp"

namespace trecdsa {

/// Plaintext of rec_{i,3}: sigma_{i,3} ‖ sigma_{3,i}, 32 bytes each. The
/// associated data names the dealer.
Bytes RecoveryBlobAssociatedData(PartyId dealer);

class KeygenParty : public Party {
 public:
  KeygenParty(PartyId role, const ProtocolParams& params, const Point& recovery_key,
              const SessionId& session, Rng rng);
  ~KeygenParty() override;

  PartyId id() const override { return role_; }
  std::size_t round_count() const override { return 4; }
  std::vector<Envelope> Step(std::size_t round, std::span<const Envelope> inbound) override;

  /// Available after the last round.
  const std::optional<KeyShareRecord>& result() const { return result_; }

 private:
  struct State;

  std::vector<Envelope> Round1();
  std::vector<Envelope> Round2(const Inbox& inbox);
  std::vector<Envelope> Round3(const Inbox& inbox);
  void Finish(const Inbox& inbox);
  Envelope Broadcast(std::uint8_t round, MessageKind kind, Bytes payload) const;
  /// Proof context binding the session and every round-1 and round-2
  /// broadcast, so a message altered in transit makes the proofs fail.
  Bytes BindingContext(std::string_view what, PartyId prover) const;

  PartyId role_;
  PartyId peer_;
  ProtocolParams params_;
  Point recovery_key_;
  SessionId session_;
  Rng rng_;
  std::unique_ptr<State> state_;
  std::optional<KeyShareRecord> result_;
};

}  // namespace trecdsa
