#include "trecdsa/keystore.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>

namespace trecdsa {
namespace {

constexpr char kMagic[4] = {'T', 'R', 'K', 'S'};
constexpr std::uint8_t kFlagSealed = 0x01;
constexpr std::size_t kSaltBytes = 16;

enum : std::uint16_t { kTagCurve = 1, kTagHash, kTagPublicKey };
enum : std::uint16_t { kTagSecret = 1 };

Bytes Header(KeystoreKind kind, std::uint8_t flags) {
  Bytes h(std::begin(kMagic), std::end(kMagic));
  AppendU16Be(kKeystoreVersion, &h);
  h.push_back(static_cast<std::uint8_t>(kind));
  h.push_back(flags);
  return h;
}

Bytes DeriveKey(const std::string& passphrase, ByteView salt, std::uint32_t iterations) {
  Bytes key(32);
  if (PKCS5_PBKDF2_HMAC(passphrase.data(), static_cast<int>(passphrase.size()), salt.data(),
                        static_cast<int>(salt.size()), static_cast<int>(iterations),
                        EVP_sha256(), static_cast<int>(key.size()), key.data()) != 1) {
    throw KeystoreError("PBKDF2 failed");
  }
  return key;
}

CurveConfig ReadConfig(TlvReader& r) {
  CurveConfig config;
  config.curve_id = static_cast<CurveId>(r.GetU32(kTagCurve));
  config.hash_id = static_cast<HashId>(r.GetU32(kTagHash));
  return config;
}

}  // namespace

Bytes EncodeKeystore(KeystoreKind kind, ByteView public_part, ByteView secret_part,
                     const SealOptions& seal, Rng& rng) {
  const bool sealed = seal.passphrase.has_value();
  Bytes out = Header(kind, sealed ? kFlagSealed : 0);
  AppendU32Be(static_cast<std::uint32_t>(public_part.size()), &out);
  AppendBytes(public_part, &out);
  if (!sealed) {
    AppendU32Be(static_cast<std::uint32_t>(secret_part.size()), &out);
    AppendBytes(secret_part, &out);
    return out;
  }
  if (seal.iterations == 0) throw std::invalid_argument("PBKDF2 needs at least one iteration");
  Bytes section = rng.RandomBytes(kSaltBytes);
  AppendU32Be(seal.iterations, &section);
  const Bytes key = DeriveKey(*seal.passphrase, ByteView(section).subspan(0, kSaltBytes),
                              seal.iterations);
  AppendBytes(AesGcmSeal(key, secret_part, out, rng), &section);
  AppendU32Be(static_cast<std::uint32_t>(section.size()), &out);
  AppendBytes(section, &out);
  return out;
}

KeystoreContents DecodeKeystore(ByteView file, const std::optional<std::string>& passphrase) {
  try {
    if (file.size() < 8 || !std::equal(std::begin(kMagic), std::end(kMagic), file.begin())) {
      throw KeystoreError("not a keystore file");
    }
    std::size_t offset = 4;
    const std::uint16_t version = ReadU16Be(file, &offset);
    if (version != kKeystoreVersion) {
      throw KeystoreError("unsupported keystore version " + std::to_string(version));
    }
    const std::uint8_t kind = file[offset++];
    const std::uint8_t flags = file[offset++];
    if (kind != 1 && kind != 2) throw KeystoreError("unknown keystore kind");
    if ((flags & ~kFlagSealed) != 0) throw KeystoreError("unknown keystore flags");

    const std::uint32_t pub_len = ReadU32Be(file, &offset);
    if (file.size() - offset < pub_len) throw KeystoreError("truncated public section");
    KeystoreContents out{static_cast<KeystoreKind>(kind), (flags & kFlagSealed) != 0,
                         Bytes(file.begin() + offset, file.begin() + offset + pub_len), {}};
    offset += pub_len;
    const Bytes authenticated(file.begin(), file.begin() + offset);
    const std::uint32_t sec_len = ReadU32Be(file, &offset);
    if (file.size() - offset != sec_len) throw KeystoreError("bad secret section length");
    const ByteView section = file.subspan(offset);

    if (!out.sealed) {
      out.secret_part.assign(section.begin(), section.end());
      return out;
    }
    if (!passphrase) return out;
    if (section.size() < kSaltBytes + 4) throw KeystoreError("truncated sealed section");
    std::size_t p = kSaltBytes;
    const std::uint32_t iterations = ReadU32Be(section, &p);
    const Bytes key = DeriveKey(*passphrase, section.subspan(0, kSaltBytes), iterations);
    std::optional<Bytes> plain = AesGcmOpen(key, section.subspan(p), authenticated);
    if (!plain) throw KeystoreError("wrong passphrase or corrupted keystore");
    out.secret_part = std::move(*plain);
    return out;
  } catch (const DecodeError& e) {
    throw KeystoreError(std::string("malformed keystore: ") + e.what());
  }
}

Bytes SaveKeyShare(const KeyShareRecord& record, const SealOptions& seal, Rng& rng) {
  return EncodeKeystore(KeystoreKind::kKeyShare, record.SerializePublic(),
                        record.SerializeSecret(), seal, rng);
}

KeyShareRecord LoadKeyShare(ByteView file, const std::optional<std::string>& passphrase) {
  const KeystoreContents c = DecodeKeystore(file, passphrase);
  if (c.kind != KeystoreKind::kKeyShare) throw KeystoreError("not a key share keystore");
  if (c.sealed && !passphrase) throw KeystoreError("keystore is sealed; passphrase required");
  try {
    return KeyShareRecord::Deserialize(c.public_part, c.secret_part);
  } catch (const std::invalid_argument& e) {
    throw KeystoreError(std::string("invalid key share: ") + e.what());
  }
}

Bytes SaveRecoveryKey(const CurveConfig& config, const RecoveryKeyPair& keys,
                      const SealOptions& seal, Rng& rng) {
  TlvWriter pub;
  pub.PutU32(kTagCurve, static_cast<std::uint32_t>(config.curve_id))
      .PutU32(kTagHash, static_cast<std::uint32_t>(config.hash_id))
      .Put(kTagPublicKey, keys.public_key.ToBytes());
  TlvWriter sec;
  sec.Put(kTagSecret, keys.secret.ToBytes());
  return EncodeKeystore(KeystoreKind::kRecoveryKey, pub.bytes(), sec.bytes(), seal, rng);
}

Point LoadRecoveryPublicKey(ByteView file) {
  const KeystoreContents c = DecodeKeystore(file, std::nullopt);
  if (c.kind != KeystoreKind::kRecoveryKey) throw KeystoreError("not a recovery keystore");
  try {
    TlvReader r(c.public_part);
    const CurveConfig config = ReadConfig(r);
    Point pk = Point::FromBytes(config.curve(), r.Get(kTagPublicKey));
    r.ExpectEnd();
    return pk;
  } catch (const std::invalid_argument& e) {
    throw KeystoreError(std::string("invalid recovery key: ") + e.what());
  }
}

RecoveryKeyPair LoadRecoveryKey(ByteView file, const std::optional<std::string>& passphrase) {
  const KeystoreContents c = DecodeKeystore(file, passphrase);
  if (c.kind != KeystoreKind::kRecoveryKey) throw KeystoreError("not a recovery keystore");
  if (c.sealed && !passphrase) throw KeystoreError("keystore is sealed; passphrase required");
  try {
    TlvReader r(c.public_part);
    const CurveConfig config = ReadConfig(r);
    const Curve& curve = config.curve();
    Point pk = Point::FromBytes(curve, r.Get(kTagPublicKey));
    r.ExpectEnd();
    TlvReader s(c.secret_part);
    Scalar sk = Scalar::FromBytes(curve, s.Get(kTagSecret));
    s.ExpectEnd();
    if (!(Point::BaseMul(sk) == pk)) throw KeystoreError("recovery key pair mismatch");
    return RecoveryKeyPair{std::move(sk), std::move(pk)};
  } catch (const std::invalid_argument& e) {
    throw KeystoreError(std::string("invalid recovery key: ") + e.what());
  }
}

Bytes ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::filesystem::path& path, ByteView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace trecdsa
