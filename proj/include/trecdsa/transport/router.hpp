#pragma once

#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trecdsa/protocol/message.hpp"

namespace trecdsa {

enum class TamperAction {
  kDrop,
  kReplacePayload,
  kFlipByte,
};

/// Alters matching envelopes in simulator mode. Unset fields match anything.
struct TamperRule {
  std::optional<PartyId> sender;
  std::optional<std::uint8_t> round;
  std::optional<MessageKind> kind;
  TamperAction action = TamperAction::kDrop;
  Bytes replacement;       // kReplacePayload
  std::size_t offset = 0;  // kFlipByte, taken modulo the payload size

  bool Matches(const Envelope& e) const;
  std::string Describe() const;
};

/// In-process message switch. Route() may be called from several threads.
class Router {
 public:
  void Register(PartyId id);
  void AddRule(TamperRule rule);

  /// Records the envelope as sent, applies the first matching rule and
  /// queues the result for its recipients. Throws std::invalid_argument for
  /// an unregistered sender or recipient.
  void Route(const Envelope& envelope);
  /// Everything queued for `id` since the last call.
  std::vector<Envelope> TakeInbox(PartyId id);

  std::vector<Envelope> sent() const;
  std::vector<Envelope> delivered() const;
  std::size_t tamper_count() const;

 private:
  struct Queue {
    PartyId id;
    std::vector<Envelope> pending;
  };

  Queue* Find(PartyId id);

  mutable std::mutex mu_;
  std::vector<Queue> queues_;
  std::vector<TamperRule> rules_;
  std::vector<Envelope> sent_;
  std::vector<Envelope> delivered_;
  std::size_t tampered_ = 0;
};

struct SessionOutcome {
  bool success = false;
  AbortCode code = AbortCode::kNone;
  std::optional<PartyId> aborted_by;
  std::size_t abort_round = 0;
  std::string detail;
  /// Envelopes as the parties sent them, in routing order.
  std::vector<Envelope> transcript;
};

struct RunOptions {
  /// Step each party on its own thread within a round. Outbound messages are
  /// still routed in party order, so transcripts stay deterministic.
  bool threaded = false;
};

/// Drives the parties round by round. Messages of round r are delivered
/// before round r + 1; `parties` gives the delivery order within a round.
/// Stops after the first round in which any party aborts.
SessionOutcome RunSession(std::span<Party* const> parties, const SessionId& session,
                          Router& router, const RunOptions& options = {});

}  // namespace trecdsa
