#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "trecdsa/algebra.hpp"
#include "trecdsa/paillier.hpp"
#include "trecdsa/protocol/message.hpp"
#include "trecdsa/vss.hpp"
#include "trecdsa/zkp/range_proof.hpp"

namespace trecdsa {

using DerivationSecret = std::array<std::uint8_t, 32>;

/// Public data every key-holder (and, at recovery time, P3) can use to
/// recompute share points and the public key.
struct KeygenPublicData {
  VssCommitments f1;     // dealing of P1
  VssCommitments f2;     // dealing of P2
  Point sigma31_point;   // sigma_{3,1} B
  Point sigma32_point;   // sigma_{3,2} B

  /// Y = u1 B + u2 B + 3 sigma_{3,1} B - 2 sigma_{3,2} B.
  Point PublicKey() const;
  /// x_who B for any of the three parties.
  Point SharePoint(PartyId who) const;

  Bytes Serialize() const;
  static KeygenPublicData Deserialize(const Curve& curve, ByteView data);
};

/// Everything P1 or P2 keeps after key generation.
struct KeyShareRecord {
  CurveConfig config;
  PartyId role;
  Scalar x;      // x_i = sigma_{1,i} + sigma_{2,i} + sigma_{3,i}
  Scalar omega;  // Lagrange-weighted share for the (P1, P2) pairing
  Point public_key;
  DerivationSecret derivation_secret;
  Point recovery_key;  // pk_3
  KeygenPublicData public_data;
  Bytes rec13;
  Bytes rec23;
  PaillierSecretKey paillier;
  AuxRsaParams aux;
  PaillierPublicKey peer_paillier;
  AuxRsaParams peer_aux;

  PartyId peer() const { return role == PartyId::kP1 ? PartyId::kP2 : PartyId::kP1; }

  Bytes SerializePublic() const;
  Bytes SerializeSecret() const;
  /// Rebuilds a record and checks its internal consistency (x B, omega, Y).
  static KeyShareRecord Deserialize(ByteView public_part, ByteView secret_part);
};

/// The parts of a key-holder's public record that P3 needs to recover its
/// share. Readable from a sealed keystore without the passphrase.
struct RecoveryMaterial {
  CurveConfig config;
  Point public_key;
  Point recovery_key;
  KeygenPublicData public_data;
  Bytes rec13;
  Bytes rec23;

  static RecoveryMaterial FromPublic(ByteView public_part);
};

/// h = H(tag ‖ d ‖ index) mod q with d as 32 bytes and index as 4 bytes,
/// both big-endian.
Scalar DerivationScalar(const CurveConfig& config, const DerivationSecret& d,
                        std::uint32_t index);
/// Y^i = Y + h B.
Point DerivePublicKey(const CurveConfig& config, const Point& y, const DerivationSecret& d,
                      std::uint32_t index);
/// d = (sigma_{2,1} sigma_{2,3} B)_x as 32 bytes.
DerivationSecret DerivationSecretFromPoint(const Point& p);

enum class Pairing : std::uint8_t {
  k12 = 12,
  k13 = 13,
  k23 = 23,
};

std::pair<PartyId, PartyId> PairingParties(Pairing pairing);
Pairing PairingFromParties(PartyId a, PartyId b);

/// Input of one signer: the Lagrange-weighted share for the pairing, already
/// shifted for key derivation when requested.
struct SigningShare {
  CurveConfig config;
  PartyId self;
  PartyId peer;
  Scalar omega;
  Point peer_omega_point;
  Point public_key;
  PaillierSecretKey paillier;
  AuxRsaParams aux;
  PaillierPublicKey peer_paillier;
  AuxRsaParams peer_aux;
};

/// omega = lambda_self (x_self + h), peer point lambda_peer (X_peer + h B),
/// public key Y + h B, where h = 0 without derivation.
SigningShare BuildSigningShare(const CurveConfig& config, PartyId self, PartyId peer,
                               const Scalar& x_self, const Point& x_peer_point,
                               const Point& public_key, const PaillierSecretKey& paillier,
                               const AuxRsaParams& aux, const PaillierPublicKey& peer_paillier,
                               const AuxRsaParams& peer_aux,
                               const std::optional<DerivationSecret>& d,
                               std::optional<std::uint32_t> derive_index);

/// Share for ordinary (P1, P2) signing.
SigningShare OrdinarySigningShare(const KeyShareRecord& record,
                                  std::optional<std::uint32_t> derive_index = std::nullopt);

}  // namespace trecdsa
