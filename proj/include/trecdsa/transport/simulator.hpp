#pragma once

// In-process runs of whole sessions: every party in one process, messages
// through a Router so tests can tamper with them.

#include <optional>
#include <vector>

#include "trecdsa/protocol/keygen.hpp"
#include "trecdsa/protocol/recovery.hpp"
#include "trecdsa/protocol/sign.hpp"
#include "trecdsa/transport/router.hpp"

namespace trecdsa {

struct SimulationOptions {
  std::vector<TamperRule> tamper;
  RunOptions run;
  /// Hooks applied to the party with id `hooked_party`.
  std::optional<PartyId> hooked_party;
  SignTestHooks hooks;
  /// Sessions that end in kDegenerateNonce are retried with fresh
  /// randomness up to this many times in total. Hooks apply only to the
  /// first attempt.
  int max_attempts = 3;
};

struct KeygenRun {
  SessionOutcome outcome;
  std::optional<KeyShareRecord> p1;
  std::optional<KeyShareRecord> p2;
};

/// P2 is stepped and routed before P1 in every round.
KeygenRun SimulateKeygen(const ProtocolParams& params, const Point& recovery_key, Rng& rng,
                         const SimulationOptions& options = {});

struct SignRun {
  SessionOutcome outcome;
  std::optional<Signature> signature;
  /// Key the signature is checked against (Y or Y^i).
  std::optional<Point> public_key;
  int attempts = 0;
  /// Per-party traces of the last attempt, in party order (lower id first).
  std::vector<SignTrace> traces;
};

SignRun SimulateSign(const KeyShareRecord& p1, const KeyShareRecord& p2,
                     const ProtocolParams& params, ByteView message,
                     std::optional<std::uint32_t> derive_index, Rng& rng,
                     const SimulationOptions& options = {});

/// Recovery signing between `online` (P1 or P2) and P3.
SignRun SimulateRecoverySign(const KeyShareRecord& online, const RecoveryKeyPair& p3_keys,
                             const ProtocolParams& params, ByteView message,
                             std::optional<std::uint32_t> derive_index, Rng& rng,
                             const SimulationOptions& options = {});

SessionId RandomSessionId(Rng& rng);

}  // namespace trecdsa
