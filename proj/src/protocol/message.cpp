#include "trecdsa/protocol/message.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace trecdsa {

std::uint32_t EvalPoint(PartyId id) {
  switch (id) {
    case PartyId::kP1: return 2;
    case PartyId::kP2: return 3;
    case PartyId::kP3: return 1;
    default: throw std::invalid_argument("no evaluation point for broadcast id");
  }
}

std::string_view PartyName(PartyId id) {
  switch (id) {
    case PartyId::kP1: return "P1";
    case PartyId::kP2: return "P2";
    case PartyId::kP3: return "P3";
    case PartyId::kBroadcast: return "all";
  }
  return "?";
}

std::string_view MessageKindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kKeygenCommit: return "keygen_commit";
    case MessageKind::kKeygenDecommit: return "keygen_decommit";
    case MessageKind::kKeygenShare: return "keygen_share";
    case MessageKind::kKeygenProof: return "keygen_proof";
    case MessageKind::kRecoveryBundle: return "recovery_bundle";
    case MessageKind::kRecoveryHello: return "recovery_hello";
    case MessageKind::kRecoveryProof: return "recovery_proof";
    case MessageKind::kSignCommit: return "sign_commit";
    case MessageKind::kSignMtaInit: return "sign_mta_init";
    case MessageKind::kSignMtaResponse: return "sign_mta_response";
    case MessageKind::kSignDelta: return "sign_delta";
    case MessageKind::kSignDecommit: return "sign_decommit";
    case MessageKind::kSignCheckCommit: return "sign_check_commit";
    case MessageKind::kSignCheckDecommit: return "sign_check_decommit";
    case MessageKind::kSignCheckCommit2: return "sign_check_commit2";
    case MessageKind::kSignCheckDecommit2: return "sign_check_decommit2";
    case MessageKind::kSignShare: return "sign_share";
    case MessageKind::kAbort: return "abort";
    case MessageKind::kRoundEnd: return "round_end";
  }
  return "unknown";
}

MessageKind MessageKindFromName(std::string_view name) {
  static constexpr MessageKind kAll[] = {
      MessageKind::kKeygenCommit,       MessageKind::kKeygenDecommit,
      MessageKind::kKeygenShare,        MessageKind::kKeygenProof,
      MessageKind::kRecoveryBundle,     MessageKind::kRecoveryHello,
      MessageKind::kRecoveryProof,      MessageKind::kSignCommit,
      MessageKind::kSignMtaInit,        MessageKind::kSignMtaResponse,
      MessageKind::kSignDelta,          MessageKind::kSignDecommit,
      MessageKind::kSignCheckCommit,    MessageKind::kSignCheckDecommit,
      MessageKind::kSignCheckCommit2,   MessageKind::kSignCheckDecommit2,
      MessageKind::kSignShare,          MessageKind::kAbort,
      MessageKind::kRoundEnd,
  };
  for (MessageKind k : kAll) {
    if (MessageKindName(k) == name) return k;
  }
  throw std::invalid_argument("unknown message kind: " + std::string(name));
}

Bytes Envelope::Encode() const {
  Bytes out;
  out.reserve(kEnvelopeHeaderBytes + payload.size());
  out.insert(out.end(), session_id.begin(), session_id.end());
  out.push_back(static_cast<std::uint8_t>(sender));
  out.push_back(static_cast<std::uint8_t>(recipient));
  out.push_back(round);
  AppendU16Be(static_cast<std::uint16_t>(kind), &out);
  AppendU32Be(static_cast<std::uint32_t>(payload.size()), &out);
  AppendBytes(payload, &out);
  return out;
}

Envelope Envelope::Decode(ByteView data) {
  if (data.size() < kEnvelopeHeaderBytes) throw DecodeError("envelope too short");
  Envelope e;
  std::copy_n(data.begin(), 16, e.session_id.begin());
  std::size_t offset = 16;
  const auto party = [](std::uint8_t b) {
    if (b != 1 && b != 2 && b != 3 && b != 0xFF) throw DecodeError("envelope: bad party id");
    return static_cast<PartyId>(b);
  };
  e.sender = party(data[offset++]);
  e.recipient = party(data[offset++]);
  e.round = data[offset++];
  e.kind = static_cast<MessageKind>(ReadU16Be(data, &offset));
  if (MessageKindName(e.kind) == "unknown") throw DecodeError("envelope: unknown message kind");
  const std::uint32_t len = ReadU32Be(data, &offset);
  if (data.size() - offset != len) throw DecodeError("envelope: payload length mismatch");
  e.payload.assign(data.begin() + offset, data.end());
  return e;
}

Envelope MakeAbortEnvelope(const SessionId& session, PartyId sender, std::uint8_t round,
                           AbortCode code) {
  Envelope e;
  e.session_id = session;
  e.sender = sender;
  e.recipient = PartyId::kBroadcast;
  e.round = round;
  e.kind = MessageKind::kAbort;
  AppendU16Be(static_cast<std::uint16_t>(code), &e.payload);
  return e;
}

const Envelope& Inbox::Expect(PartyId from, MessageKind kind) const {
  const Envelope* found = nullptr;
  for (const Envelope& e : messages_) {
    if (e.sender != from || !e.IsFor(self_)) continue;
    if (e.kind == MessageKind::kAbort) {
      throw ProtocolAbort(AbortCode::kPeerAbort,
                          std::string(PartyName(from)) + " aborted the session");
    }
    if (e.kind != kind) continue;
    if (e.session_id != session_) {
      throw ProtocolAbort(AbortCode::kSessionMismatch, "message from another session");
    }
    if (found != nullptr) {
      throw ProtocolAbort(AbortCode::kUnexpectedMessage,
                          "duplicate " + std::string(MessageKindName(kind)));
    }
    found = &e;
  }
  if (found == nullptr) {
    throw ProtocolAbort(AbortCode::kTimeout, "no " + std::string(MessageKindName(kind)) +
                                                 " from " + std::string(PartyName(from)));
  }
  return *found;
}

}  // namespace trecdsa
