#include "trecdsa/protocol/recovery_box.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

#include "trecdsa/hash.hpp"

namespace trecdsa {
namespace {

constexpr std::size_t kNonceBytes = 12;
constexpr std::size_t kTagBytes = 16;
constexpr std::size_t kKeyBytes = 32;

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

CipherCtx NewCtx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  return ctx;
}

Bytes DeriveKey(const Point& ephemeral, const Point& shared) {
  Transcript t("trecdsa/recovery-box/kdf");
  t.Append("E", ephemeral.ToBytes()).Append("S", shared.ToBytes());
  const Digest d = t.Finish();
  return Bytes(d.begin(), d.end());
}

}  // namespace

RecoveryKeyPair RecoveryKeyPair::Generate(const Curve& curve, Rng& rng) {
  Scalar sk = Scalar::RandomNonZero(curve, rng);
  Point pk = Point::BaseMul(sk);
  return RecoveryKeyPair{std::move(sk), std::move(pk)};
}

Bytes AesGcmSeal(ByteView key, ByteView plaintext, ByteView associated_data, Rng& rng) {
  if (key.size() != kKeyBytes) throw std::invalid_argument("AES-256-GCM key must be 32 bytes");
  Bytes out = rng.RandomBytes(kNonceBytes);
  CipherCtx ctx = NewCtx();
  int len = 0;
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), out.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, associated_data.data(),
                        static_cast<int>(associated_data.size())) != 1) {
    throw std::runtime_error("AES-GCM init failed");
  }
  out.resize(kNonceBytes + plaintext.size() + kTagBytes);
  if (EVP_EncryptUpdate(ctx.get(), out.data() + kNonceBytes, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), out.data() + kNonceBytes + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagBytes,
                          out.data() + kNonceBytes + plaintext.size()) != 1) {
    throw std::runtime_error("AES-GCM encryption failed");
  }
  return out;
}

std::optional<Bytes> AesGcmOpen(ByteView key, ByteView sealed, ByteView associated_data) {
  if (key.size() != kKeyBytes || sealed.size() < kNonceBytes + kTagBytes) return std::nullopt;
  const std::size_t ct_len = sealed.size() - kNonceBytes - kTagBytes;
  CipherCtx ctx = NewCtx();
  Bytes out(ct_len);
  int len = 0;
  Bytes tag(sealed.end() - kTagBytes, sealed.end());
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), sealed.data()) != 1 ||
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, associated_data.data(),
                        static_cast<int>(associated_data.size())) != 1 ||
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data() + kNonceBytes,
                        static_cast<int>(ct_len)) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagBytes, tag.data()) != 1) {
    return std::nullopt;
  }
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) return std::nullopt;
  return out;
}

Bytes SealForRecovery(const Point& recipient, ByteView plaintext, ByteView associated_data,
                      Rng& rng) {
  const Curve& curve = recipient.curve();
  const Scalar e = Scalar::RandomNonZero(curve, rng);
  const Point ephemeral = Point::BaseMul(e);
  const Bytes key = DeriveKey(ephemeral, e * recipient);
  Bytes out = ephemeral.ToBytes();
  AppendBytes(AesGcmSeal(key, plaintext, associated_data, rng), &out);
  return out;
}

std::optional<Bytes> OpenRecoveryBlob(const Scalar& secret, ByteView blob,
                                      ByteView associated_data) {
  if (blob.size() < kPointBytes + kNonceBytes + kTagBytes) return std::nullopt;
  Point ephemeral(secret.curve());
  try {
    ephemeral = Point::FromBytes(secret.curve(), blob.subspan(0, kPointBytes));
  } catch (const DecodeError&) {
    return std::nullopt;
  }
  if (ephemeral.IsIdentity()) return std::nullopt;
  const Bytes key = DeriveKey(ephemeral, secret * ephemeral);
  return AesGcmOpen(key, blob.subspan(kPointBytes), associated_data);
}

}  // namespace trecdsa
