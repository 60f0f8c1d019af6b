#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trecdsa {

/// One code per protocol check. Codes are stable and appear on the wire
/// (abort envelopes) and in CLI output.
enum class AbortCode : std::uint16_t {
  kNone = 0,
  kMalformedMessage = 1,
  kTimeout = 2,
  kConnectionLost = 3,
  kPeerAbort = 4,
  kUnexpectedMessage = 5,

  kKeygenDecommitment = 100,
  kVssShare = 101,
  kSchnorrProof = 102,
  kFactorizationProof = 103,
  kPaillierKeyRejected = 104,
  kAuxParamsRejected = 105,
  kPublicKeyMismatch = 106,

  kRecoveryDecrypt = 200,
  kRecoveryInconsistent = 201,

  kRangeProofInitiator = 300,
  kRangeProofRespondent = 301,
  kDegenerateNonce = 302,
  kSignDecommitment = 303,
  kCheckDecommitment = 304,
  kPartialSignatureProof = 305,
  kCheckMismatch = 306,
  kInvalidSignature = 307,
  kSessionMismatch = 308,
};

std::string_view AbortCodeName(AbortCode code);
/// Inverse of AbortCodeName; kNone for unknown names.
AbortCode AbortCodeFromName(std::string_view name);

class ProtocolAbort : public std::runtime_error {
 public:
  ProtocolAbort(AbortCode code, const std::string& detail)
      : std::runtime_error(std::string(AbortCodeName(code)) + ": " + detail), code_(code) {}

  AbortCode code() const { return code_; }

 private:
  AbortCode code_;
};

}  // namespace trecdsa
