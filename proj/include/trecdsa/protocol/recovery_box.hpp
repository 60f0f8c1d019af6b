#pragma once

// Encryption of recovery material under P3's long-term key. An ephemeral
// Diffie-Hellman on the protocol curve yields a shared point; the key is
// hashed from it with a domain tag and the payload is sealed with
// AES-256-GCM.
//
// Blob layout: E (33 bytes, compressed ephemeral point) ‖ nonce (12) ‖
// ciphertext ‖ tag (16).

#include <optional>

#include "trecdsa/algebra.hpp"

namespace trecdsa {

struct RecoveryKeyPair {
  Scalar secret;
  Point public_key;

  static RecoveryKeyPair Generate(const Curve& curve, Rng& rng);
};

Bytes SealForRecovery(const Point& recipient, ByteView plaintext, ByteView associated_data,
                      Rng& rng);
/// nullopt when the blob is malformed or authentication fails.
std::optional<Bytes> OpenRecoveryBlob(const Scalar& secret, ByteView blob,
                                      ByteView associated_data);

/// AES-256-GCM with an explicit key; shared with the keystore sealing.
/// Output is nonce ‖ ciphertext ‖ tag.
Bytes AesGcmSeal(ByteView key, ByteView plaintext, ByteView associated_data, Rng& rng);
std::optional<Bytes> AesGcmOpen(ByteView key, ByteView sealed, ByteView associated_data);

}  // namespace trecdsa
