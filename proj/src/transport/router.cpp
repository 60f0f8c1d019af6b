#include "trecdsa/transport/router.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace trecdsa {

bool TamperRule::Matches(const Envelope& e) const {
  return (!sender || *sender == e.sender) && (!round || *round == e.round) &&
         (!kind || *kind == e.kind);
}

std::string TamperRule::Describe() const {
  std::ostringstream out;
  switch (action) {
    case TamperAction::kDrop: out << "drop"; break;
    case TamperAction::kReplacePayload: out << "replace"; break;
    case TamperAction::kFlipByte: out << "flip@" << offset; break;
  }
  if (sender) out << " from=" << PartyName(*sender);
  if (round) out << " round=" << static_cast<int>(*round);
  if (kind) out << " kind=" << MessageKindName(*kind);
  return out.str();
}

void Router::Register(PartyId id) {
  std::lock_guard lock(mu_);
  if (Find(id) == nullptr) queues_.push_back(Queue{id, {}});
}

void Router::AddRule(TamperRule rule) {
  std::lock_guard lock(mu_);
  rules_.push_back(std::move(rule));
}

Router::Queue* Router::Find(PartyId id) {
  for (Queue& q : queues_) {
    if (q.id == id) return &q;
  }
  return nullptr;
}

void Router::Route(const Envelope& envelope) {
  std::lock_guard lock(mu_);
  if (Find(envelope.sender) == nullptr) {
    throw std::invalid_argument("envelope from unregistered party");
  }
  if (envelope.recipient != PartyId::kBroadcast && Find(envelope.recipient) == nullptr) {
    throw std::invalid_argument("envelope for unregistered party");
  }
  sent_.push_back(envelope);

  Envelope out = envelope;
  for (const TamperRule& rule : rules_) {
    if (!rule.Matches(out)) continue;
    ++tampered_;
    switch (rule.action) {
      case TamperAction::kDrop: return;
      case TamperAction::kReplacePayload: out.payload = rule.replacement; break;
      case TamperAction::kFlipByte:
        if (!out.payload.empty()) out.payload[rule.offset % out.payload.size()] ^= 0x01;
        break;
    }
    break;
  }
  for (Queue& q : queues_) {
    if (q.id != out.sender && out.IsFor(q.id)) q.pending.push_back(out);
  }
  delivered_.push_back(std::move(out));
}

std::vector<Envelope> Router::TakeInbox(PartyId id) {
  std::lock_guard lock(mu_);
  Queue* q = Find(id);
  if (q == nullptr) throw std::invalid_argument("unregistered party");
  return std::exchange(q->pending, {});
}

std::vector<Envelope> Router::sent() const {
  std::lock_guard lock(mu_);
  return sent_;
}

std::vector<Envelope> Router::delivered() const {
  std::lock_guard lock(mu_);
  return delivered_;
}

std::size_t Router::tamper_count() const {
  std::lock_guard lock(mu_);
  return tampered_;
}

SessionOutcome RunSession(std::span<Party* const> parties, const SessionId& session,
                          Router& router, const RunOptions& options) {
  std::size_t rounds = 0;
  for (Party* p : parties) {
    router.Register(p->id());
    rounds = std::max(rounds, p->round_count());
  }

  struct StepResult {
    std::vector<Envelope> out;
    std::optional<ProtocolAbort> abort;
  };

  SessionOutcome outcome;
  for (std::size_t round = 1; round <= rounds; ++round) {
    std::vector<std::vector<Envelope>> inboxes;
    for (Party* p : parties) inboxes.push_back(router.TakeInbox(p->id()));

    std::vector<StepResult> results(parties.size());
    auto step = [&](std::size_t i) {
      try {
        results[i].out = parties[i]->Step(round, inboxes[i]);
      } catch (const ProtocolAbort& e) {
        results[i].abort = e;
      }
    };
    if (options.threaded) {
      std::vector<std::thread> threads;
      for (std::size_t i = 0; i < parties.size(); ++i) threads.emplace_back(step, i);
      for (std::thread& t : threads) t.join();
    } else {
      for (std::size_t i = 0; i < parties.size(); ++i) step(i);
    }

    bool aborted = false;
    for (std::size_t i = 0; i < parties.size(); ++i) {
      for (const Envelope& e : results[i].out) router.Route(e);
      if (!results[i].abort) continue;
      const PartyId id = parties[i]->id();
      router.Route(MakeAbortEnvelope(session, id, static_cast<std::uint8_t>(round),
                                     results[i].abort->code()));
      // The first abort that is not merely an echo of a peer's abort names
      // the failed check.
      const bool echo = results[i].abort->code() == AbortCode::kPeerAbort;
      if (!aborted || (outcome.code == AbortCode::kPeerAbort && !echo)) {
        outcome.code = results[i].abort->code();
        outcome.aborted_by = id;
        outcome.abort_round = round;
        outcome.detail = results[i].abort->what();
      }
      aborted = true;
    }
    if (aborted) {
      outcome.transcript = router.sent();
      return outcome;
    }
  }
  outcome.success = true;
  outcome.transcript = router.sent();
  return outcome;
}

}  // namespace trecdsa
