#include "trecdsa/abort.hpp"

#include <array>
#include <utility>

namespace trecdsa {
namespace {

constexpr std::array<std::pair<AbortCode, std::string_view>, 24> kNames{{
    {AbortCode::kNone, "none"},
    {AbortCode::kMalformedMessage, "malformed_message"},
    {AbortCode::kTimeout, "timeout"},
    {AbortCode::kConnectionLost, "connection_lost"},
    {AbortCode::kPeerAbort, "peer_abort"},
    {AbortCode::kUnexpectedMessage, "unexpected_message"},
    {AbortCode::kKeygenDecommitment, "keygen_decommitment"},
    {AbortCode::kVssShare, "vss_share"},
    {AbortCode::kSchnorrProof, "schnorr_proof"},
    {AbortCode::kFactorizationProof, "factorization_proof"},
    {AbortCode::kPaillierKeyRejected, "paillier_key_rejected"},
    {AbortCode::kAuxParamsRejected, "aux_params_rejected"},
    {AbortCode::kPublicKeyMismatch, "public_key_mismatch"},
    {AbortCode::kRecoveryDecrypt, "recovery_decrypt"},
    {AbortCode::kRecoveryInconsistent, "recovery_inconsistent"},
    {AbortCode::kRangeProofInitiator, "range_proof_initiator"},
    {AbortCode::kRangeProofRespondent, "range_proof_respondent"},
    {AbortCode::kDegenerateNonce, "degenerate_nonce"},
    {AbortCode::kSignDecommitment, "sign_decommitment"},
    {AbortCode::kCheckDecommitment, "check_decommitment"},
    {AbortCode::kPartialSignatureProof, "partial_signature_proof"},
    {AbortCode::kCheckMismatch, "check_mismatch"},
    {AbortCode::kInvalidSignature, "invalid_signature"},
    {AbortCode::kSessionMismatch, "session_mismatch"},
}};

}  // namespace

std::string_view AbortCodeName(AbortCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "unknown";
}

AbortCode AbortCodeFromName(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return AbortCode::kNone;
}

}  // namespace trecdsa
