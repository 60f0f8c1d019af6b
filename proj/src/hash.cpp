#include "trecdsa/hash.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>
#include <string>

#include "trecdsa/bigint.hpp"

namespace trecdsa {
namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

Digest EvpDigest(const EVP_MD* md, ByteView data) {
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  Digest out{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
    throw std::runtime_error("digest computation failed");
  }
  return out;
}

}  // namespace

Digest Sha256(ByteView data) { return EvpDigest(EVP_sha256(), data); }

Digest HashWith(HashId id, ByteView data) {
  switch (id) {
    case HashId::kSha256:
      return EvpDigest(EVP_sha256(), data);
    case HashId::kSha3_256:
      return EvpDigest(EVP_sha3_256(), data);
  }
  throw std::invalid_argument("unknown hash id");
}

std::string_view HashName(HashId id) {
  switch (id) {
    case HashId::kSha256:
      return "sha256";
    case HashId::kSha3_256:
      return "sha3-256";
  }
  return "unknown";
}

HashId HashIdFromName(std::string_view name) {
  if (name == "sha256") return HashId::kSha256;
  if (name == "sha3-256") return HashId::kSha3_256;
  throw std::invalid_argument("unknown hash function: " + std::string(name));
}

Transcript::Transcript(std::string_view domain) { Append("domain", AsBytes(domain)); }

Transcript& Transcript::Append(std::string_view label, ByteView data) {
  AppendU32Be(static_cast<std::uint32_t>(label.size()), &buffer_);
  AppendBytes(AsBytes(label), &buffer_);
  AppendU32Be(static_cast<std::uint32_t>(data.size()), &buffer_);
  AppendBytes(data, &buffer_);
  return *this;
}

Transcript& Transcript::AppendMpz(std::string_view label, const mpz_class& value) {
  return Append(label, EncodeMpz(value));
}

Transcript& Transcript::AppendU32(std::string_view label, std::uint32_t value) {
  Bytes b;
  AppendU32Be(value, &b);
  return Append(label, b);
}

Digest Transcript::Finish() const { return Sha256(buffer_); }

Bytes Transcript::Expand(std::size_t count) const {
  const Digest seed = Finish();
  Bytes out;
  out.reserve(count + 32);
  for (std::uint32_t block = 0; out.size() < count; ++block) {
    Bytes input(seed.begin(), seed.end());
    AppendU32Be(block, &input);
    const Digest d = Sha256(input);
    out.insert(out.end(), d.begin(), d.end());
  }
  out.resize(count);
  return out;
}

mpz_class Transcript::ChallengeBelow(const mpz_class& bound) const {
  if (bound <= 0) {
    throw std::invalid_argument("challenge bound must be positive");
  }
  const std::size_t bytes = (BitLength(bound) + 128 + 7) / 8;
  return Mod(DecodeMpz(Expand(bytes)), bound);
}

}  // namespace trecdsa
