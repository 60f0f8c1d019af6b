#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "trecdsa/abort.hpp"
#include "trecdsa/bytes.hpp"

namespace trecdsa {

enum class PartyId : std::uint8_t {
  kP1 = 1,
  kP2 = 2,
  kP3 = 3,
  kBroadcast = 0xFF,
};

/// Shamir evaluation point of each party: P1 -> 2, P2 -> 3, P3 -> 1.
std::uint32_t EvalPoint(PartyId id);
std::string_view PartyName(PartyId id);

enum class MessageKind : std::uint16_t {
  kKeygenCommit = 0x0101,
  kKeygenDecommit = 0x0102,
  kKeygenShare = 0x0103,
  kKeygenProof = 0x0104,

  kRecoveryBundle = 0x0201,
  kRecoveryHello = 0x0202,
  kRecoveryProof = 0x0203,

  kSignCommit = 0x0301,
  kSignMtaInit = 0x0302,
  kSignMtaResponse = 0x0303,
  kSignDelta = 0x0304,
  kSignDecommit = 0x0305,
  kSignCheckCommit = 0x0306,
  kSignCheckDecommit = 0x0307,
  kSignCheckCommit2 = 0x0308,
  kSignCheckDecommit2 = 0x0309,
  kSignShare = 0x030A,

  kAbort = 0x0F01,
  kRoundEnd = 0x0F02,
};

std::string_view MessageKindName(MessageKind kind);
/// Inverse of MessageKindName. Throws std::invalid_argument.
MessageKind MessageKindFromName(std::string_view name);

using SessionId = std::array<std::uint8_t, 16>;

/// Wire layout: session id (16) ‖ sender (1) ‖ recipient (1) ‖ round (1) ‖
/// kind (2) ‖ payload length (4) ‖ payload. Integers are big-endian.
struct Envelope {
  SessionId session_id{};
  PartyId sender = PartyId::kP1;
  PartyId recipient = PartyId::kBroadcast;
  std::uint8_t round = 0;
  MessageKind kind = MessageKind::kAbort;
  Bytes payload;

  bool IsFor(PartyId id) const { return recipient == id || recipient == PartyId::kBroadcast; }

  Bytes Encode() const;
  static Envelope Decode(ByteView data);

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

constexpr std::size_t kEnvelopeHeaderBytes = 16 + 1 + 1 + 1 + 2 + 4;

/// Abort notification payload: the code as u16.
Envelope MakeAbortEnvelope(const SessionId& session, PartyId sender, std::uint8_t round,
                           AbortCode code);

/// View over the messages delivered to one party for one round.
class Inbox {
 public:
  Inbox(std::span<const Envelope> messages, const SessionId& session, PartyId self)
      : messages_(messages), session_(session), self_(self) {}

  /// The unique message of `kind` from `from`. Throws ProtocolAbort with
  /// kPeerAbort if the peer announced an abort, kTimeout if the message is
  /// missing and kUnexpectedMessage on duplicates or a foreign session.
  const Envelope& Expect(PartyId from, MessageKind kind) const;

 private:
  std::span<const Envelope> messages_;
  SessionId session_;
  PartyId self_;
};

/// Runs `parse`, mapping decoding failures to kMalformedMessage.
template <typename F>
auto ParseOrAbort(std::string_view what, F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const ProtocolAbort&) {
    throw;
  } catch (const std::exception& e) {
    throw ProtocolAbort(AbortCode::kMalformedMessage, std::string(what) + ": " + e.what());
  }
}

/// A party in a synchronous-round protocol. Step(r, inbound) receives what
/// peers sent in round r - 1 and returns the messages of round r. The last
/// round returns nothing and completes the party's output.
class Party {
 public:
  virtual ~Party() = default;
  virtual PartyId id() const = 0;
  virtual std::size_t round_count() const = 0;
  /// Throws ProtocolAbort.
  virtual std::vector<Envelope> Step(std::size_t round, std::span<const Envelope> inbound) = 0;
};

}  // namespace trecdsa
