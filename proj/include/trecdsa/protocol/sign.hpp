#pragma once

// Two-party signing for any pairing. With k = k_A + k_B, gamma = gamma_A +
// gamma_B and u = omega_A + omega_B the parties produce R = k^-1 B and
// s = k(e + r u) without either learning k or u.
//
// Rounds (all broadcast between the two signers):
//   1. commit to G_i = gamma_i B
//   2. MtA initiations for k_i gamma_j and k_i omega_j
//   3. MtA responses (the omega one checked against the peer's omega point)
//   4. delta_i
//   5. open G_i with a Schnorr proof for gamma_i
//   6. commit to W_i = s_i R + l_i B and Z_i = rho_i B
//   7. open W_i, Z_i with a proof of knowledge of (s_i, l_i, rho_i)
//   8. commit to U_i = rho_i W and T_i = l_i Z, W = -eB - rY + W_A + W_B
//   9. open U_i, T_i
//  10. abort unless T_A + T_B = U_A + U_B; otherwise release s_i
//  11. combine and verify (no messages)

#include <memory>
#include <optional>

#include "trecdsa/mta.hpp"
#include "trecdsa/protocol/key_share.hpp"
#include "trecdsa/protocol/message.hpp"
#include "trecdsa/zkp/commitment.hpp"

namespace trecdsa {

/// Deliberate misbehaviour for negative tests.
struct SignTestHooks {
  /// Build W_i from a random value instead of s_i (and prove it honestly).
  bool corrupt_partial_signature = false;
  /// Treat r as zero, as if R had landed on x = 0 mod q.
  bool force_zero_r = false;
};

/// Values a test harness may inspect after the session; secret material.
struct SignTrace {
  std::optional<Scalar> k;
  std::optional<Scalar> gamma;
  std::optional<Scalar> delta_share;
  std::optional<Scalar> sigma_share;
  std::optional<Scalar> delta;
  std::optional<Point> big_r;
  std::optional<Scalar> s_share;
};

class SignParty : public Party {
 public:
  static constexpr std::size_t kRounds = 11;

  /// `round_offset` shifts the round numbers on the wire, for signing that
  /// follows other rounds in the same session.
  SignParty(SigningShare share, const MtaOptions& mta, Bytes message, const SessionId& session,
            Rng rng, std::size_t round_offset = 0, SignTestHooks hooks = {});
  ~SignParty() override;

  PartyId id() const override { return share_.self; }
  std::size_t round_count() const override { return round_offset_ + kRounds; }
  std::vector<Envelope> Step(std::size_t round, std::span<const Envelope> inbound) override;

  const std::optional<Signature>& result() const { return result_; }
  const SignTrace& trace() const { return trace_; }

 private:
  struct State;

  std::vector<Envelope> Local(std::size_t round, const Inbox& inbox);
  Envelope Broadcast(std::size_t local_round, MessageKind kind, Bytes payload) const;
  Bytes Context(std::string_view what, PartyId owner) const;
  std::string Domain(std::string_view what, PartyId owner) const;

  SigningShare share_;
  MtaOptions mta_;
  Bytes message_;
  SessionId session_;
  Rng rng_;
  std::size_t round_offset_;
  SignTestHooks hooks_;
  std::unique_ptr<State> state_;
  SignTrace trace_;
  std::optional<Signature> result_;
};

}  // namespace trecdsa
