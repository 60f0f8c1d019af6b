#pragma once

// Shared helpers for unit tests and the acceptance binary.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trecdsa/algebra.hpp"
#include "trecdsa/keystore.hpp"
#include "trecdsa/protocol/key_share.hpp"
#include "trecdsa/protocol/params.hpp"
#include "trecdsa/protocol/recovery_box.hpp"
#include "trecdsa/transport/simulator.hpp"
#include "trecdsa/zkp.hpp"

namespace trecdsa::testing {

/// ECDSA verification through OpenSSL's EVP interface, independent of the
/// library's own verifier. The signature is re-encoded with OpenSSL's
/// ECDSA_SIG rather than Signature::ToDer.
bool ExternalVerify(const CurveConfig& config, const Point& public_key, ByteView message,
                    const Signature& signature);

struct TestKeys {
  ProtocolParams params;
  RecoveryKeyPair p3;
  KeyShareRecord p1;
  KeyShareRecord p2;
};

/// Honest setup and key generation. Throws std::runtime_error on abort.
TestKeys GenerateKeys(const ProtocolParams& params, Rng& rng);

/// Keys generated once per process at tiny sizes, for tests that only need
/// some valid key material.
const TestKeys& SharedTinyKeys();

/// Shares x1 = F(2), x2 = F(3) of the joint polynomial F; F(0) = u.
Scalar ReconstructSecret(const KeyShareRecord& p1, const KeyShareRecord& p2);
/// F(1) = x3.
Scalar ReconstructP3Share(const KeyShareRecord& p1, const KeyShareRecord& p2);

Bytes AsMessage(std::string_view text);

// ------------------------------------------------------------ perturbation

struct FieldCheck {
  std::string field;
  bool accepted;
};

/// Verifies the proof once per single-field change (every proof field and
/// every statement input), reporting whether the altered instance was
/// accepted. Exceptions from verification count as rejection.
std::vector<FieldCheck> PerturbSchnorr(const SchnorrProof& proof, const Point& x,
                                       ByteView context);
std::vector<FieldCheck> PerturbFactorization(const FactorizationProof& proof, const mpz_class& n,
                                             ByteView context);
std::vector<FieldCheck> PerturbInitiatorRange(const InitiatorRangeProof& proof,
                                              const Curve& curve, const PaillierPublicKey& pk,
                                              const AuxRsaParams& aux,
                                              const PaillierCiphertext& c, ByteView context);
std::vector<FieldCheck> PerturbRespondentRange(const RespondentRangeProof& proof,
                                               const Curve& curve, const PaillierPublicKey& pk,
                                               const AuxRsaParams& aux,
                                               const PaillierCiphertext& c1,
                                               const PaillierCiphertext& c2,
                                               const std::optional<Point>& b_point,
                                               ByteView context);
std::vector<FieldCheck> PerturbPartialSignature(const PartialSignatureProof& proof,
                                                const Point& big_r, const Point& w,
                                                const Point& z, ByteView context);

// ------------------------------------------------------------ tamper sweep

enum class SweepTarget {
  kKeygen,
  kSign,
  kRecovery13,
  kRecovery23,
};

std::string_view SweepTargetName(SweepTarget target);

struct SweepCase {
  TamperRule rule;
  SessionOutcome outcome;
  /// A signature was produced and verifies under the expected key.
  bool valid_signature = false;
  /// The abort reason is one of the checks able to catch this tampering.
  bool reason_expected = false;
  /// An honest party's partial signature appears in the sent messages of an
  /// aborted run.
  bool honest_share_leaked = false;

  bool ok() const;
  std::string Describe() const;
};

/// Abort codes a tampered message of `kind` may legitimately produce.
std::vector<AbortCode> ExpectedAbortCodes(MessageKind kind, TamperAction action);

/// Runs one honest session to learn the message schedule, then one session
/// per (sender, round, kind) and action: drop, a replaced payload, and byte
/// flips at the start, middle and end.
std::vector<SweepCase> RunTamperSweep(SweepTarget target, const TestKeys& keys, Rng& rng);

}  // namespace trecdsa::testing
