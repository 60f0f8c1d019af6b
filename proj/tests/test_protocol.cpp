#include <doctest.h>

#include "support.hpp"
#include "trecdsa/protocol/keygen.hpp"
#include "trecdsa/protocol/recovery.hpp"
#include "trecdsa/protocol/sign.hpp"
#include "trecdsa/transport/simulator.hpp"

namespace trecdsa {
namespace {

using testing::SharedTinyKeys;
using testing::TestKeys;

const std::uint32_t kIndices[] = {0, 1, 7, 0x80000000u};

TEST_SUITE("protocol") {
  TEST_CASE("keygen: both parties agree and the joint secret matches Y") {
    const TestKeys& k = SharedTinyKeys();
    CHECK(k.p1.public_key == k.p2.public_key);
    CHECK(k.p1.derivation_secret == k.p2.derivation_secret);
    CHECK(k.p1.rec13 == k.p2.rec13);
    CHECK(k.p1.rec23 == k.p2.rec23);
    CHECK(k.p1.public_data.PublicKey() == k.p1.public_key);
    const Scalar u = testing::ReconstructSecret(k.p1, k.p2);
    CHECK(Point::BaseMul(u) == k.p1.public_key);
    // omega_1 + omega_2 = u for the (P1, P2) pairing.
    CHECK(k.p1.omega + k.p2.omega == u);
    for (PartyId who : {PartyId::kP1, PartyId::kP2}) {
      const KeyShareRecord& r = who == PartyId::kP1 ? k.p1 : k.p2;
      CHECK(Point::BaseMul(r.x) == k.p1.public_data.SharePoint(who));
    }
    CHECK(Point::BaseMul(testing::ReconstructP3Share(k.p1, k.p2)) ==
          k.p1.public_data.SharePoint(PartyId::kP3));
    CHECK(k.p1.paillier.public_key() == k.p2.peer_paillier);
    CHECK(k.p2.aux == k.p1.peer_aux);
  }

  TEST_CASE("keygen is deterministic under a seed") {
    const ProtocolParams params = ProtocolParams::Tiny();
    Rng a = Rng::FromSeed(std::uint64_t{71});
    Rng b = Rng::FromSeed(std::uint64_t{71});
    const TestKeys ka = testing::GenerateKeys(params, a);
    const TestKeys kb = testing::GenerateKeys(params, b);
    CHECK(ka.p1.public_key == kb.p1.public_key);
    CHECK(ka.p1.SerializeSecret() == kb.p1.SerializeSecret());
    CHECK(ka.p2.SerializePublic() == kb.p2.SerializePublic());
  }

  TEST_CASE("key share records survive serialization and detect tampering") {
    const TestKeys& k = SharedTinyKeys();
    const KeyShareRecord back =
        KeyShareRecord::Deserialize(k.p1.SerializePublic(), k.p1.SerializeSecret());
    CHECK(back.x == k.p1.x);
    CHECK(back.omega == k.p1.omega);
    CHECK(back.public_key == k.p1.public_key);
    // x from P2 does not match P1's public share point.
    CHECK_THROWS(KeyShareRecord::Deserialize(k.p1.SerializePublic(), k.p2.SerializeSecret()));
  }

  TEST_CASE("ordinary signing verifies internally and externally") {
    const TestKeys& k = SharedTinyKeys();
    Rng rng = Rng::FromSeed(std::uint64_t{72});
    for (int i = 0; i < 3; ++i) {
      const Bytes msg = rng.RandomBytes(20 + i);
      const SignRun run = SimulateSign(k.p1, k.p2, k.params, msg, std::nullopt, rng);
      REQUIRE(run.outcome.success);
      REQUIRE(run.signature);
      CHECK(*run.public_key == k.p1.public_key);
      CHECK(EcdsaVerify(k.p1.config, k.p1.public_key, msg, *run.signature));
      CHECK(testing::ExternalVerify(k.p1.config, k.p1.public_key, msg, *run.signature));
    }
  }

  TEST_CASE("signing traces match the centralized algorithm") {
    const TestKeys& k = SharedTinyKeys();
    Rng rng = Rng::FromSeed(std::uint64_t{73});
    const Bytes msg = testing::AsMessage("trace");
    const SignRun run = SimulateSign(k.p1, k.p2, k.params, msg, std::nullopt, rng);
    REQUIRE(run.outcome.success);
    REQUIRE(run.traces.size() == 2);
    const SignTrace& a = run.traces[0];
    const SignTrace& b = run.traces[1];
    const Scalar kk = *a.k + *b.k;
    const Scalar gamma = *a.gamma + *b.gamma;
    // delta = k gamma, sigma = k u, R = k^-1 B, and the whole signature is
    // what EcdsaSign computes from u and k.
    CHECK(*a.delta == kk * gamma);
    CHECK(*a.delta_share + *b.delta_share == kk * gamma);
    const Scalar u = testing::ReconstructSecret(k.p1, k.p2);
    CHECK(*a.sigma_share + *b.sigma_share == kk * u);
    CHECK(*a.big_r == Point::BaseMul(kk.Inverse()));
    const Signature central = EcdsaSign(k.p1.config, u, msg, kk);
    CHECK(central.r == run.signature->r);
    CHECK(central.s == run.signature->s);
    CHECK(*a.s_share + *b.s_share == central.s);
  }

  TEST_CASE("recovery signing: both pairings sign under the same Y") {
    const TestKeys& k = SharedTinyKeys();
    Rng rng = Rng::FromSeed(std::uint64_t{74});
    const Bytes msg = testing::AsMessage("recovery");
    for (const KeyShareRecord* online : {&k.p1, &k.p2}) {
      const SignRun run = SimulateRecoverySign(*online, k.p3, k.params, msg, std::nullopt, rng);
      REQUIRE(run.outcome.success);
      CHECK(*run.public_key == k.p1.public_key);
      CHECK(EcdsaVerify(k.p1.config, k.p1.public_key, msg, *run.signature));
      CHECK(testing::ExternalVerify(k.p1.config, k.p1.public_key, msg, *run.signature));
    }
  }

  TEST_CASE("P3 recovers x3 = F(1) and the derivation secret") {
    const TestKeys& k = SharedTinyKeys();
    const RecoveredShare rec =
        RecoverP3Share(k.p3, k.p1.public_key, k.p1.public_data, k.p1.rec13, k.p1.rec23);
    CHECK(rec.x3 == testing::ReconstructP3Share(k.p1, k.p2));
    CHECK(Point::BaseMul(rec.x3) == k.p1.public_data.SharePoint(PartyId::kP3));
    CHECK(rec.derivation_secret == k.p1.derivation_secret);
    // Lagrange-weighted shares add up to the secret for both pairings.
    const Curve& c = k.p1.x.curve();
    const Scalar u = testing::ReconstructSecret(k.p1, k.p2);
    CHECK(LagrangeWeight(c, 2, 1) * k.p1.x + LagrangeWeight(c, 1, 2) * rec.x3 == u);
    CHECK(LagrangeWeight(c, 3, 1) * k.p2.x + LagrangeWeight(c, 1, 3) * rec.x3 == u);
  }

  TEST_CASE("P3 rejects swapped or foreign recovery blobs") {
    const TestKeys& k = SharedTinyKeys();
    auto code_of = [&](ByteView r13, ByteView r23, const RecoveryKeyPair& keys) {
      try {
        RecoverP3Share(keys, k.p1.public_key, k.p1.public_data, r13, r23);
      } catch (const ProtocolAbort& e) {
        return e.code();
      }
      return AbortCode::kNone;
    };
    CHECK(code_of(k.p1.rec23, k.p1.rec13, k.p3) == AbortCode::kRecoveryDecrypt);
    Rng rng = Rng::FromSeed(std::uint64_t{75});
    const RecoveryKeyPair other = RecoveryKeyPair::Generate(k.p1.x.curve(), rng);
    CHECK(code_of(k.p1.rec13, k.p1.rec23, other) == AbortCode::kRecoveryDecrypt);
    // A blob that decrypts but carries the wrong shares.
    const Bytes fake = SealForRecovery(k.p3.public_key, Bytes(64, 0x07),
                                       RecoveryBlobAssociatedData(PartyId::kP1), rng);
    CHECK(code_of(fake, k.p1.rec23, k.p3) == AbortCode::kRecoveryInconsistent);
  }

  TEST_CASE("derived keys agree across all pairings") {
    const TestKeys& k = SharedTinyKeys();
    Rng rng = Rng::FromSeed(std::uint64_t{76});
    const Bytes msg = testing::AsMessage("derived");
    for (std::uint32_t index : {std::uint32_t{0}, std::uint32_t{7}}) {
      const Point expected =
          k.p1.public_key +
          Point::BaseMul(DerivationScalar(k.p1.config, k.p1.derivation_secret, index));
      CHECK(DerivePublicKey(k.p1.config, k.p1.public_key, k.p1.derivation_secret, index) ==
            expected);
      const SignRun ordinary = SimulateSign(k.p1, k.p2, k.params, msg, index, rng);
      const SignRun rec13 = SimulateRecoverySign(k.p1, k.p3, k.params, msg, index, rng);
      const SignRun rec23 = SimulateRecoverySign(k.p2, k.p3, k.params, msg, index, rng);
      for (const SignRun* run : {&ordinary, &rec13, &rec23}) {
        REQUIRE(run->outcome.success);
        CHECK(*run->public_key == expected);
        CHECK(EcdsaVerify(k.p1.config, expected, msg, *run->signature));
        CHECK_FALSE(EcdsaVerify(k.p1.config, k.p1.public_key, msg, *run->signature));
      }
    }
  }

  TEST_CASE("derivation scalar hashes d and a 32-bit big-endian index") {
    const TestKeys& k = SharedTinyKeys();
    for (std::uint32_t i : kIndices) {
      Bytes input = {'t', 'r', 'e', 'c', 'd', 's', 'a', '/', 'd', 'e', 'r', 'i', 'v', 'e',
                     '/', 'v', '1'};
      AppendBytes(k.p1.derivation_secret, &input);
      AppendU32Be(i, &input);
      CHECK(DerivationScalar(k.p1.config, k.p1.derivation_secret, i) ==
            HashToScalar(k.p1.config, input));
    }
    CHECK_FALSE(DerivationScalar(k.p1.config, k.p1.derivation_secret, 1) ==
                DerivationScalar(k.p1.config, k.p1.derivation_secret, 0x01000000u));
  }

  TEST_CASE("a corrupted partial signature fails the check before any s_i is sent") {
    const TestKeys& k = SharedTinyKeys();
    Rng rng = Rng::FromSeed(std::uint64_t{77});
    for (int i = 0; i < 10; ++i) {
      SimulationOptions options;
      options.hooked_party = i % 2 == 0 ? PartyId::kP2 : PartyId::kP1;
      options.hooks.corrupt_partial_signature = true;
      const SignRun run = SimulateSign(k.p1, k.p2, k.params, testing::AsMessage("check"),
                                       std::nullopt, rng, options);
      CHECK_FALSE(run.outcome.success);
      CHECK(run.outcome.code == AbortCode::kCheckMismatch);
      for (const Envelope& e : run.outcome.transcript) {
        CHECK(e.kind != MessageKind::kSignShare);
      }
    }
  }

  TEST_CASE("r = 0 aborts with a retryable reason") {
    const TestKeys& k = SharedTinyKeys();
    Rng rng = Rng::FromSeed(std::uint64_t{78});
    SimulationOptions options;
    options.hooked_party = PartyId::kP1;
    options.hooks.force_zero_r = true;
    options.max_attempts = 1;
    const Bytes msg = testing::AsMessage("zero r");
    const SignRun once = SimulateSign(k.p1, k.p2, k.params, msg, std::nullopt, rng, options);
    CHECK(once.outcome.code == AbortCode::kDegenerateNonce);
    options.max_attempts = 2;
    const SignRun retried = SimulateSign(k.p1, k.p2, k.params, msg, std::nullopt, rng, options);
    CHECK(retried.outcome.success);
    CHECK(retried.attempts == 2);
  }

  TEST_CASE("range proofs can be disabled by both parties") {
    const TestKeys& k = SharedTinyKeys();
    Rng rng = Rng::FromSeed(std::uint64_t{79});
    ProtocolParams params = k.params;
    params.mta.range_proofs = false;
    const Bytes msg = testing::AsMessage("no range proofs");
    const SignRun run = SimulateSign(k.p1, k.p2, params, msg, std::nullopt, rng);
    REQUIRE(run.outcome.success);
    CHECK(EcdsaVerify(k.p1.config, k.p1.public_key, msg, *run.signature));
  }

  TEST_CASE("prime256v1 end to end") {
    ProtocolParams params = ProtocolParams::Tiny();
    params.curve = CurveConfig{CurveId::kPrime256v1, HashId::kSha256};
    Rng rng = Rng::FromSeed(std::uint64_t{80});
    const TestKeys k = testing::GenerateKeys(params, rng);
    const Bytes msg = testing::AsMessage("p256");
    const SignRun run = SimulateSign(k.p1, k.p2, params, msg, std::nullopt, rng);
    REQUIRE(run.outcome.success);
    CHECK(testing::ExternalVerify(params.curve, k.p1.public_key, msg, *run.signature));
    const SignRun rec = SimulateRecoverySign(k.p2, k.p3, params, msg, 3, rng);
    REQUIRE(rec.outcome.success);
    CHECK(testing::ExternalVerify(params.curve, *rec.public_key, msg, *rec.signature));
  }

  TEST_CASE("undersized peer Paillier keys are refused at keygen") {
    Rng rng = Rng::FromSeed(std::uint64_t{81});
    const RecoveryKeyPair p3 = RecoveryKeyPair::Generate(Curve::Secp256k1(), rng);
    ProtocolParams small = ProtocolParams::Tiny();
    small.paillier_bits = 512;
    ProtocolParams strict = ProtocolParams::Tiny();
    const SessionId session = RandomSessionId(rng);
    KeygenParty p1(PartyId::kP1, strict, p3.public_key, session, rng.Fork("a"));
    KeygenParty p2(PartyId::kP2, small, p3.public_key, session, rng.Fork("b"));
    Router router;
    Party* parties[] = {&p2, &p1};
    const SessionOutcome outcome = RunSession(parties, session, router);
    CHECK_FALSE(outcome.success);
    CHECK(outcome.code == AbortCode::kPaillierKeyRejected);
  }
}

TEST_SUITE("slow") {
  TEST_CASE("check phase catches a substituted partial signature in 1000 runs") {
    const TestKeys& k = SharedTinyKeys();
    Rng rng = Rng::FromSeed(std::uint64_t{82});
    ProtocolParams params = k.params;
    params.mta.range_proofs = false;
    int passed_check = 0;
    int leaked = 0;
    for (int i = 0; i < 1000; ++i) {
      SimulationOptions options;
      options.hooked_party = PartyId::kP2;
      options.hooks.corrupt_partial_signature = true;
      const SignRun run = SimulateSign(k.p1, k.p2, params, testing::AsMessage("check"),
                                       std::nullopt, rng, options);
      if (run.outcome.code != AbortCode::kCheckMismatch) ++passed_check;
      for (const Envelope& e : run.outcome.transcript) {
        if (e.kind == MessageKind::kSignShare && e.sender == PartyId::kP1) ++leaked;
      }
    }
    CHECK(passed_check == 0);
    CHECK(leaked == 0);
  }
}

}  // namespace
}  // namespace trecdsa
