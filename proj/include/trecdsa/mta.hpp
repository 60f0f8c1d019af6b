#pragma once

// Multiplicative-to-additive conversion over Paillier. The initiator holds a
// and a Paillier key; the responder holds b. Afterwards the initiator knows
// alpha and the responder beta with alpha + beta = a b mod q, provided that
// a b + beta' < N (beta' is drawn from all of Z_N).
//
// Range proofs are verified against the verifier's own auxiliary parameters:
// the initiator's proof uses the responder's (M, h1, h2) and vice versa.

#include <optional>

#include "trecdsa/abort.hpp"
#include "trecdsa/algebra.hpp"
#include "trecdsa/paillier.hpp"
#include "trecdsa/zkp/range_proof.hpp"

namespace trecdsa {

/// Which of the four conversions in a signing session a message belongs to.
enum class MtaInstance : std::uint8_t {
  kKaGammaB = 1,
  kKbGammaA = 2,
  kKaOmegaB = 3,
  kKbOmegaA = 4,
};

struct MtaOptions {
  bool range_proofs = true;
};

struct MtaInitMessage {
  PaillierCiphertext c;
  std::optional<InitiatorRangeProof> proof;

  Bytes Serialize() const;
  static MtaInitMessage Deserialize(ByteView data);
};

struct MtaResponseMessage {
  PaillierCiphertext c;
  std::optional<RespondentRangeProof> proof;

  Bytes Serialize() const;
  static MtaResponseMessage Deserialize(const Curve& curve, ByteView data);
};

struct MtaInitiatorState {
  Scalar a;
  PaillierCiphertext c;
};

struct MtaResponse {
  MtaResponseMessage message;
  Scalar beta;
};

/// Encrypts a under the initiator's key and proves a < q^3 to the
/// responder, whose auxiliary parameters are `responder_aux`.
std::pair<MtaInitMessage, MtaInitiatorState> MtaInit(const Scalar& a,
                                                     const PaillierPublicKey& initiator_pk,
                                                     const AuxRsaParams& responder_aux,
                                                     ByteView context, const MtaOptions& options,
                                                     Rng& rng);

/// Verifies the initiator's proof and answers with b x c_A + E(beta').
/// `b_point` = b B selects the checked variant. Throws ProtocolAbort.
MtaResponse MtaRespond(const Scalar& b, const MtaInitMessage& init,
                       const PaillierPublicKey& initiator_pk, const AuxRsaParams& responder_aux,
                       const AuxRsaParams& initiator_aux, const std::optional<Point>& b_point,
                       ByteView context, const MtaOptions& options, Rng& rng);

/// Verifies the responder's proof (with the initiator's own auxiliary
/// parameters) and returns alpha = D(c_B) mod q. Throws ProtocolAbort.
Scalar MtaFinalize(const MtaInitiatorState& state, const MtaResponseMessage& response,
                   const PaillierSecretKey& initiator_sk, const AuxRsaParams& initiator_aux,
                   const std::optional<Point>& b_point, ByteView context,
                   const MtaOptions& options);

}  // namespace trecdsa
