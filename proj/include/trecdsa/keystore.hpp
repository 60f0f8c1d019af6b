#pragma once

// Versioned key files. Layout (all integers big-endian):
//
//   "TRKS" ‖ version u16 ‖ kind u8 ‖ flags u8 ‖
//   public length u32 ‖ public TLV ‖ secret length u32 ‖ secret section
//
// Without a passphrase the secret section is the secret TLV itself. With
// one (flag bit 0) it is salt (16) ‖ PBKDF2 iterations u32 ‖ AES-256-GCM
// output (nonce ‖ ciphertext ‖ tag), keyed by PBKDF2-HMAC-SHA256 over the
// passphrase and authenticated over the header and public section.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "trecdsa/protocol/key_share.hpp"
#include "trecdsa/protocol/recovery_box.hpp"

namespace trecdsa {

constexpr std::uint16_t kKeystoreVersion = 1;

enum class KeystoreKind : std::uint8_t {
  kKeyShare = 1,
  kRecoveryKey = 2,
};

class KeystoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeystoreContents {
  KeystoreKind kind;
  bool sealed;
  Bytes public_part;
  Bytes secret_part;  // empty when sealed and no passphrase was given
};

struct SealOptions {
  std::optional<std::string> passphrase;
  std::uint32_t iterations = 200000;
};

Bytes EncodeKeystore(KeystoreKind kind, ByteView public_part, ByteView secret_part,
                     const SealOptions& seal, Rng& rng);
/// Without a passphrase a sealed file yields only its public part.
/// Throws KeystoreError on bad magic, version, framing or authentication.
KeystoreContents DecodeKeystore(ByteView file, const std::optional<std::string>& passphrase);

Bytes SaveKeyShare(const KeyShareRecord& record, const SealOptions& seal, Rng& rng);
KeyShareRecord LoadKeyShare(ByteView file, const std::optional<std::string>& passphrase);

Bytes SaveRecoveryKey(const CurveConfig& config, const RecoveryKeyPair& keys,
                      const SealOptions& seal, Rng& rng);
RecoveryKeyPair LoadRecoveryKey(ByteView file, const std::optional<std::string>& passphrase);
/// pk_3 from a recovery key file; needs no passphrase.
Point LoadRecoveryPublicKey(ByteView file);

Bytes ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, ByteView data);

}  // namespace trecdsa
