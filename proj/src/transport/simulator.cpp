#include "trecdsa/transport/simulator.hpp"

#include <algorithm>

namespace trecdsa {
namespace {

void AddRules(Router& router, const SimulationOptions& options) {
  for (const TamperRule& rule : options.tamper) router.AddRule(rule);
}

SignTestHooks HooksFor(PartyId id, const SimulationOptions& options, int attempt) {
  if (attempt > 0 || options.hooked_party != id) return {};
  return options.hooks;
}

// Runs `attempt_fn(attempt)` until it does not end in kDegenerateNonce.
template <typename F>
SignRun WithRetries(const SimulationOptions& options, F&& attempt_fn) {
  SignRun run;
  for (int attempt = 0; attempt < std::max(1, options.max_attempts); ++attempt) {
    run = attempt_fn(attempt);
    run.attempts = attempt + 1;
    if (run.outcome.success || run.outcome.code != AbortCode::kDegenerateNonce) break;
  }
  return run;
}

}  // namespace

SessionId RandomSessionId(Rng& rng) {
  SessionId id{};
  rng.Fill(id);
  return id;
}

KeygenRun SimulateKeygen(const ProtocolParams& params, const Point& recovery_key, Rng& rng,
                         const SimulationOptions& options) {
  const SessionId session = RandomSessionId(rng);
  KeygenParty p1(PartyId::kP1, params, recovery_key, session, rng.Fork("keygen/P1"));
  KeygenParty p2(PartyId::kP2, params, recovery_key, session, rng.Fork("keygen/P2"));
  Router router;
  AddRules(router, options);
  Party* order[] = {&p2, &p1};
  KeygenRun run;
  run.outcome = RunSession(order, session, router, options.run);
  if (run.outcome.success) {
    run.p1 = p1.result();
    run.p2 = p2.result();
  }
  return run;
}

SignRun SimulateSign(const KeyShareRecord& p1, const KeyShareRecord& p2,
                     const ProtocolParams& params, ByteView message,
                     std::optional<std::uint32_t> derive_index, Rng& rng,
                     const SimulationOptions& options) {
  return WithRetries(options, [&](int attempt) {
    const SessionId session = RandomSessionId(rng);
    const Bytes msg(message.begin(), message.end());
    SignParty a(OrdinarySigningShare(p1, derive_index), params.mta, msg, session,
                rng.Fork("sign/P1"), 0, HooksFor(PartyId::kP1, options, attempt));
    SignParty b(OrdinarySigningShare(p2, derive_index), params.mta, msg, session,
                rng.Fork("sign/P2"), 0, HooksFor(PartyId::kP2, options, attempt));
    Router router;
    AddRules(router, options);
    Party* order[] = {&a, &b};
    SignRun run;
    run.outcome = RunSession(order, session, router, options.run);
    run.public_key = OrdinarySigningShare(p1, derive_index).public_key;
    run.traces = {a.trace(), b.trace()};
    if (run.outcome.success) run.signature = a.result();
    return run;
  });
}

SignRun SimulateRecoverySign(const KeyShareRecord& online, const RecoveryKeyPair& p3_keys,
                             const ProtocolParams& params, ByteView message,
                             std::optional<std::uint32_t> derive_index, Rng& rng,
                             const SimulationOptions& options) {
  return WithRetries(options, [&](int attempt) {
    const SessionId session = RandomSessionId(rng);
    const RecoveryRequest request{Bytes(message.begin(), message.end()), derive_index};
    RecoveryOnlineParty a(online, params, request, session, rng.Fork("recovery/online"),
                          HooksFor(online.role, options, attempt));
    RecoveryP3Party b(p3_keys, online.role, params, request, session, rng.Fork("recovery/P3"),
                      HooksFor(PartyId::kP3, options, attempt));
    Router router;
    AddRules(router, options);
    Party* order[] = {&a, &b};
    SignRun run;
    run.outcome = RunSession(order, session, router, options.run);
    run.public_key = derive_index ? DerivePublicKey(online.config, online.public_key,
                                                    online.derivation_secret, *derive_index)
                                  : online.public_key;
    if (a.signer()) run.traces.push_back(a.signer()->trace());
    if (b.signer()) run.traces.push_back(b.signer()->trace());
    if (run.outcome.success) run.signature = a.result();
    return run;
  });
}

}  // namespace trecdsa
