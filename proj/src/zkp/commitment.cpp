#include "trecdsa/zkp/commitment.hpp"

#include <algorithm>

namespace trecdsa {
namespace {

constexpr std::uint16_t kTagPayload = 1;
constexpr std::uint16_t kTagNonce = 2;

Digest CommitmentDigest(std::string_view domain, ByteView payload,
                        const std::array<std::uint8_t, 32>& nonce) {
  Transcript t("trecdsa/commitment");
  t.Append("tag", AsBytes(domain)).Append("payload", payload).Append("nonce", nonce);
  return t.Finish();
}

}  // namespace

Bytes Decommitment::Serialize() const {
  TlvWriter w;
  w.Put(kTagPayload, payload).Put(kTagNonce, nonce);
  return w.Take();
}

Decommitment Decommitment::Deserialize(ByteView data) {
  TlvReader r(data);
  Decommitment out;
  out.payload = r.Get(kTagPayload);
  const Bytes nonce = r.Get(kTagNonce);
  r.ExpectEnd();
  if (nonce.size() != out.nonce.size()) {
    throw DecodeError("commitment nonce must be 32 bytes");
  }
  std::copy(nonce.begin(), nonce.end(), out.nonce.begin());
  return out;
}

std::pair<Commitment, Decommitment> Commit(std::string_view domain, ByteView payload, Rng& rng) {
  Decommitment opening{Bytes(payload.begin(), payload.end()), rng.Random32()};
  Commitment commitment{CommitmentDigest(domain, opening.payload, opening.nonce)};
  return {commitment, std::move(opening)};
}

std::optional<Bytes> VerifyCommitment(std::string_view domain, const Commitment& commitment,
                                      const Decommitment& opening) {
  if (CommitmentDigest(domain, opening.payload, opening.nonce) != commitment.digest) {
    return std::nullopt;
  }
  return opening.payload;
}

}  // namespace trecdsa
