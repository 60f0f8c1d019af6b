// Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails. --only=N[,M...] runs a subset; --report=PATH also writes
// the lines to a file.

#include <chrono>
#include <fstream>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "trecdsa/bigint.hpp"
#include "trecdsa/mta.hpp"
#include "trecdsa/protocol/recovery.hpp"
#include "trecdsa/vss.hpp"
#include "trecdsa/zkp.hpp"

namespace trecdsa {
namespace {

using testing::AsMessage;
using testing::ExternalVerify;
using testing::TestKeys;

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void Fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
  void Expect(bool ok, const std::string& why) {
    if (!ok) Fail(why);
  }
};

bool BothVerify(const CurveConfig& config, const Point& y, ByteView msg, const Signature& sig) {
  return EcdsaVerify(config, y, msg, sig) && ExternalVerify(config, y, msg, sig);
}

// ------------------------------------------------------------------- 1

void EndToEnd(Result& res) {
  const ProtocolParams params = ProtocolParams::Test();
  Rng rng = Rng::FromSeed(std::uint64_t{0xACC1});
  int ok = 0;
  constexpr int kRuns = 100;
  for (int i = 0; i < kRuns; ++i) {
    const TestKeys keys = testing::GenerateKeys(params, rng);
    const Bytes msg = AsMessage("acceptance run " + std::to_string(i));
    const SignRun run = SimulateSign(keys.p1, keys.p2, params, msg, std::nullopt, rng);
    const bool good = run.outcome.success && run.signature &&
                      *run.public_key == keys.p1.public_key &&
                      BothVerify(params.curve, keys.p1.public_key, msg, *run.signature);
    res.Expect(good, "run " + std::to_string(i) + ": " + run.outcome.detail);
    ok += good;
  }
  res.detail << ok << "/" << kRuns << " signatures accepted by internal and external verifier";
}

// ------------------------------------------------------------------- 2

void RecoveryEquivalence(Result& res) {
  const ProtocolParams params = ProtocolParams::Test();
  const Curve& curve = params.curve.curve();
  Rng rng = Rng::FromSeed(std::uint64_t{0xACC2});
  constexpr int kKeygens = 20;
  int sigs = 0, identities = 0;
  for (int i = 0; i < kKeygens; ++i) {
    const TestKeys keys = testing::GenerateKeys(params, rng);
    const Point& y = keys.p1.public_key;
    const Bytes msg = AsMessage("recovery " + std::to_string(i));

    const SignRun ordinary = SimulateSign(keys.p1, keys.p2, params, msg, std::nullopt, rng);
    const bool ordinary_ok = ordinary.outcome.success && *ordinary.public_key == y &&
                             BothVerify(params.curve, y, msg, *ordinary.signature);
    res.Expect(ordinary_ok, "ordinary sign in keygen " + std::to_string(i));

    for (const KeyShareRecord* online : {&keys.p1, &keys.p2}) {
      const SignRun run =
          SimulateRecoverySign(*online, keys.p3, params, msg, std::nullopt, rng);
      const bool good = run.outcome.success && run.signature && *run.public_key == y &&
                        BothVerify(params.curve, y, msg, *run.signature);
      res.Expect(good, "recovery with P" + std::to_string(int(online->role)) + " in keygen " +
                           std::to_string(i) + ": " + run.outcome.detail);
      sigs += good;
    }

    // P3's share from its own decryption of the recovery blobs.
    const RecoveredShare rec =
        RecoverP3Share(keys.p3, y, keys.p1.public_data, keys.p1.rec13, keys.p1.rec23);
    const Scalar omega3_with1 = LagrangeWeight(curve, 1, 2) * rec.x3;
    const Scalar omega1_tilde = LagrangeWeight(curve, 2, 1) * keys.p1.x;
    const Scalar omega3_with2 = LagrangeWeight(curve, 1, 3) * rec.x3;
    const Scalar omega2_tilde = LagrangeWeight(curve, 3, 1) * keys.p2.x;
    const bool id13 = Point::BaseMul(omega1_tilde + omega3_with1) == y;
    const bool id23 = Point::BaseMul(omega2_tilde + omega3_with2) == y;
    res.Expect(id13 && id23, "share identity in keygen " + std::to_string(i));
    identities += id13 + id23;
  }
  res.detail << sigs << "/" << 2 * kKeygens << " recovery signatures verify under Y; "
             << identities << "/" << 2 * kKeygens << " share identities hold";
}

// ------------------------------------------------------------------- 3

void Derivation(Result& res) {
  const ProtocolParams params = ProtocolParams::Test();
  Rng rng = Rng::FromSeed(std::uint64_t{0xACC3});
  const TestKeys keys = testing::GenerateKeys(params, rng);
  const Point& y = keys.p1.public_key;
  const RecoveredShare rec =
      RecoverP3Share(keys.p3, y, keys.p1.public_data, keys.p1.rec13, keys.p1.rec23);
  res.Expect(rec.derivation_secret == keys.p1.derivation_secret &&
                 keys.p2.derivation_secret == keys.p1.derivation_secret,
             "parties disagree on d");
  int ok = 0, total = 0;
  for (const std::uint32_t index : {0u, 1u, 7u, 1u << 31}) {
    // Y^i = Y + H(d || i) B, computed here from the published derivation.
    const Point expected =
        y + Point::BaseMul(DerivationScalar(params.curve, keys.p1.derivation_secret, index));
    const Bytes msg = AsMessage("derived " + std::to_string(index));
    const SignRun runs[] = {
        SimulateSign(keys.p1, keys.p2, params, msg, index, rng),
        SimulateRecoverySign(keys.p1, keys.p3, params, msg, index, rng),
        SimulateRecoverySign(keys.p2, keys.p3, params, msg, index, rng),
    };
    const char* names[] = {"12", "13", "23"};
    for (int p = 0; p < 3; ++p) {
      const SignRun& run = runs[p];
      const bool good = run.outcome.success && run.public_key && *run.public_key == expected &&
                        BothVerify(params.curve, expected, msg, *run.signature);
      res.Expect(good, std::string("pairing ") + names[p] + " index " + std::to_string(index));
      ok += good;
      ++total;
    }
  }
  res.detail << ok << "/" << total << " (index, pairing) signatures verify under Y + H(d||i)B";
}

// ------------------------------------------------------------------- 4

void MtaCorrectness(Result& res) {
  const Curve& curve = Curve::Secp256k1();
  Rng rng = Rng::FromSeed(std::uint64_t{0xACC4});
  const PaillierSecretKey sk_a = GeneratePaillierKey(2048, rng);
  const AuxRsaParams aux_a = GenerateAuxRsaParams(2048, rng);
  const AuxRsaParams aux_b = GenerateAuxRsaParams(2048, rng);
  const Bytes context = AsMessage("acceptance mta");
  const MtaOptions options;  // range proofs on

  auto run = [&](const PaillierSecretKey& sk, const Scalar& a, const Scalar& b, bool checked,
                 const MtaOptions& opts) {
    const std::optional<Point> b_point =
        checked ? std::optional<Point>(Point::BaseMul(b)) : std::nullopt;
    auto [init, state] = MtaInit(a, sk.public_key(), aux_b, context, opts, rng);
    const MtaResponse resp =
        MtaRespond(b, init, sk.public_key(), aux_b, aux_a, b_point, context, opts, rng);
    return MtaFinalize(state, resp.message, sk, aux_a, b_point, context, opts) + resp.beta;
  };

  constexpr int kPairs = 500;
  for (const bool checked : {false, true}) {
    int ok = 0;
    for (int i = 0; i < kPairs; ++i) {
      const Scalar a = Scalar::Random(curve, rng);
      const Scalar b = Scalar::Random(curve, rng);
      const bool good = run(sk_a, a, b, checked, options) == a * b;
      res.Expect(good, std::string(checked ? "MtAwc" : "MtA") + " pair " + std::to_string(i));
      ok += good;
    }
    res.detail << (checked ? "MtAwc " : "MtA ") << ok << "/" << kPairs << "; ";
  }

  // Wraparound: N of 320 bits < q^2, a b overflows N and the shares break.
  const PaillierSecretKey small = GeneratePaillierKey(320, rng);
  MtaOptions no_proofs;
  no_proofs.range_proofs = false;
  const Scalar a(curve, (curve.order() - 1) / 3);
  const Scalar b(curve, (curve.order() - 1) / 5);
  const bool wrapped = !(run(small, a, b, false, no_proofs) == a * b);
  const bool big_fine = run(sk_a, a, b, false, no_proofs) == a * b;
  res.Expect(wrapped && big_fine, "wraparound case did not behave as expected");
  res.detail << "320-bit N wraparound " << (wrapped ? "fails as expected" : "did NOT fail");
}

// ------------------------------------------------------------------- 5

void ZkpSuite(Result& res) {
  const Curve& curve = Curve::Secp256k1();
  Rng rng = Rng::FromSeed(std::uint64_t{0xACC5});
  const PaillierSecretKey sk = GeneratePaillierKey(1024, rng);
  const PaillierPublicKey& pk = sk.public_key();
  const AuxRsaParams aux = GenerateAuxRsaParams(1024, rng);
  const Bytes context = AsMessage("acceptance zkp");
  constexpr int kInstances = 100;

  std::size_t perturbations = 0, false_accepts = 0;
  auto tally = [&](const std::vector<testing::FieldCheck>& checks, const std::string& type) {
    res.Expect(!checks.empty(), type + ": empty perturbation set");
    for (const auto& c : checks) {
      ++perturbations;
      if (c.accepted) {
        ++false_accepts;
        res.Fail(type + " accepted perturbed " + c.field);
      }
    }
  };
  std::map<std::string, int> complete;

  for (int i = 0; i < kInstances; ++i) {
    const Scalar x = Scalar::Random(curve, rng);
    const Point big_x = Point::BaseMul(x);
    const SchnorrProof schnorr = SchnorrProve(x, big_x, context, rng);
    complete["schnorr"] += SchnorrVerify(schnorr, big_x, context);
    tally(testing::PerturbSchnorr(schnorr, big_x, context), "schnorr");

    const FactorizationProof fact = ProveFactorization(pk.n(), sk.Phi(), context, rng);
    complete["factorization"] += VerifyFactorization(fact, pk.n(), context);
    tally(testing::PerturbFactorization(fact, pk.n(), context), "factorization");

    const mpz_class m = rng.Below(curve.order());
    mpz_class r;
    const PaillierCiphertext c = pk.Encrypt(m, rng, &r);
    const InitiatorRangeProof init = ProveInitiatorRange(curve, pk, aux, c, m, r, context, rng);
    complete["range_initiator"] += VerifyInitiatorRange(init, curve, pk, aux, c, context);
    tally(testing::PerturbInitiatorRange(init, curve, pk, aux, c, context), "range_initiator");

    const mpz_class b = rng.Below(curve.order());
    const mpz_class y = rng.Below(pk.n());
    mpz_class r2;
    const PaillierCiphertext c2 = pk.Add(pk.ScalarMul(b, c), pk.Encrypt(y, rng, &r2));
    const std::optional<Point> b_point =
        i % 2 == 0 ? std::optional<Point>(Point::BaseMul(Scalar(curve, b))) : std::nullopt;
    const RespondentRangeProof resp =
        ProveRespondentRange(curve, pk, aux, c, c2, b, y, r2, b_point, context, rng);
    complete["range_respondent"] +=
        VerifyRespondentRange(resp, curve, pk, aux, c, c2, b_point, context);
    tally(testing::PerturbRespondentRange(resp, curve, pk, aux, c, c2, b_point, context),
          "range_respondent");

    const Point big_r = Point::BaseMul(Scalar::RandomNonZero(curve, rng));
    const Scalar s = Scalar::Random(curve, rng);
    const Scalar l = Scalar::Random(curve, rng);
    const Scalar rho = Scalar::Random(curve, rng);
    const Point w = s * big_r + Point::BaseMul(l);
    const Point z = Point::BaseMul(rho);
    const PartialSignatureProof psp = ProvePartialSignature(big_r, w, z, s, l, rho, context, rng);
    complete["partial_signature"] += VerifyPartialSignature(psp, big_r, w, z, context);
    tally(testing::PerturbPartialSignature(psp, big_r, w, z, context), "partial_signature");
  }
  for (const auto& [type, count] : complete) {
    res.Expect(count == kInstances, type + " completeness " + std::to_string(count));
    res.detail << type << " " << count << "/" << kInstances << "; ";
  }

  int extracted = 0;
  for (int i = 0; i < 50; ++i) {
    const Scalar x = Scalar::Random(curve, rng);
    const Point big_x = Point::BaseMul(x);
    const SchnorrCommitment com = SchnorrCommit(curve, rng);
    const Scalar c1 = Scalar::Random(curve, rng);
    Scalar c2 = Scalar::Random(curve, rng);
    if (c2 == c1) c2 += Scalar::One(curve);
    const Scalar z1 = SchnorrRespond(x, com, c1);
    const Scalar z2 = SchnorrRespond(x, com, c2);
    extracted += SchnorrCheck(big_x, com.u, c1, z1) && SchnorrCheck(big_x, com.u, c2, z2) &&
                 SchnorrExtract(c1, z1, c2, z2) == x;
  }
  res.Expect(extracted == 50, "extraction " + std::to_string(extracted) + "/50");
  res.detail << false_accepts << " false accepts over " << perturbations
             << " perturbations; extraction " << extracted << "/50";
}

// ------------------------------------------------------------------- 6

void TamperSweep(Result& res) {
  Rng rng = Rng::FromSeed(std::uint64_t{0xACC6});
  const TestKeys keys = testing::GenerateKeys(ProtocolParams::Tiny(), rng);
  std::size_t total = 0, aborted = 0, valid = 0, leaks = 0, bad = 0;
  for (const testing::SweepTarget target :
       {testing::SweepTarget::kKeygen, testing::SweepTarget::kSign,
        testing::SweepTarget::kRecovery13, testing::SweepTarget::kRecovery23}) {
    const std::vector<testing::SweepCase> cases = testing::RunTamperSweep(target, keys, rng);
    res.Expect(!cases.empty(), "empty sweep");
    for (const testing::SweepCase& c : cases) {
      ++total;
      leaks += c.honest_share_leaked;
      if (c.outcome.success) {
        ++valid;
      } else {
        ++aborted;
      }
      if (!c.ok()) {
        ++bad;
        res.Fail(std::string(testing::SweepTargetName(target)) + " " + c.Describe());
        std::cerr << "  sweep failure: " << testing::SweepTargetName(target) << " "
                  << c.Describe() << "\n";
      }
    }
  }
  res.detail << total << " tampered runs: " << aborted << " aborted, "
             << valid << " produced a valid signature; honest s_i found in " << leaks
             << " aborted transcripts; "
             << bad << " runs with a wrong reason or an invalid signature";
}

// ------------------------------------------------------------------- 7

void HomomorphicAndVss(Result& res) {
  const Curve& curve = Curve::Secp256k1();
  Rng rng = Rng::FromSeed(std::uint64_t{0xACC7});
  const PaillierSecretKey sk = GeneratePaillierKey(1024, rng);
  const PaillierPublicKey& pk = sk.public_key();
  constexpr int kInstances = 1000;
  int paillier_ok = 0, feldman_ok = 0, lagrange_ok = 0;
  for (int i = 0; i < kInstances; ++i) {
    const mpz_class m1 = rng.Below(pk.n());
    const mpz_class m2 = rng.Below(pk.n());
    const mpz_class k = rng.Below(pk.n());
    const PaillierCiphertext c1 = pk.Encrypt(m1, rng);
    const PaillierCiphertext c2 = pk.Encrypt(m2, rng);
    paillier_ok += sk.Decrypt(c1) == m1 && sk.Decrypt(pk.Add(c1, c2)) == Mod(m1 + m2, pk.n()) &&
                   sk.Decrypt(pk.ScalarMul(k, c1)) == Mod(k * m1, pk.n());

    const Scalar secret = Scalar::Random(curve, rng);
    const VssDealing dealing = VssDeal(secret, rng);
    bool feldman = true;
    for (std::uint32_t x = 1; x <= 3; ++x) {
      feldman = feldman && VssVerifyShare(dealing.commitments, x, dealing.ShareAt(x));
      feldman = feldman && !VssVerifyShare(dealing.commitments, x,
                                           dealing.ShareAt(x) + Scalar::One(curve));
    }
    feldman_ok += feldman;

    // f(X) = a0 + a1 X evaluated directly; 3 f(2) - 2 f(3) = f(0).
    const Scalar a0 = Scalar::Random(curve, rng);
    const Scalar a1 = Scalar::Random(curve, rng);
    const Scalar f2 = a0 + Scalar(curve, 2L) * a1;
    const Scalar f3 = a0 + Scalar(curve, 3L) * a1;
    lagrange_ok += Scalar(curve, 3L) * f2 - Scalar(curve, 2L) * f3 == a0 &&
                   LagrangeWeight(curve, 2, 3) * f2 + LagrangeWeight(curve, 3, 2) * f3 == a0;
  }
  res.Expect(paillier_ok == kInstances, "paillier");
  res.Expect(feldman_ok == kInstances, "feldman");
  res.Expect(lagrange_ok == kInstances, "lagrange");
  res.detail << "paillier " << paillier_ok << "/" << kInstances << "; feldman " << feldman_ok
             << "/" << kInstances << "; lagrange " << lagrange_ok << "/" << kInstances;
}

// ------------------------------------------------------------------- 8

void Performance(Result& res) {
  const ProtocolParams params = ProtocolParams::Production();
  Rng rng = Rng::FromSystem();
  const auto start = std::chrono::steady_clock::now();
  const TestKeys keys = testing::GenerateKeys(params, rng);
  const auto mid = std::chrono::steady_clock::now();
  const Bytes msg = AsMessage("production sizes");
  const SignRun run = SimulateSign(keys.p1, keys.p2, params, msg, std::nullopt, rng);
  const auto end = std::chrono::steady_clock::now();
  const double keygen_s = std::chrono::duration<double>(mid - start).count();
  const double sign_s = std::chrono::duration<double>(end - mid).count();
  const bool good = run.outcome.success &&
                    BothVerify(params.curve, keys.p1.public_key, msg, *run.signature);
  res.Expect(good, "production signature invalid");
  res.Expect(keygen_s + sign_s < 60.0, "over 60 s");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "keygen %.2f s + sign %.2f s = %.2f s (limit 60 s)", keygen_s,
                sign_s, keygen_s + sign_s);
  res.detail << buf;
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Result&)> run;
};

}  // namespace
}  // namespace trecdsa

int main(int argc, char** argv) {
  using namespace trecdsa;
  std::set<int> only;
  std::ofstream report;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--only=", 0) == 0) {
      std::stringstream list(arg.substr(7));
      for (std::string item; std::getline(list, item, ',');) only.insert(std::stoi(item));
    } else if (arg.rfind("--report=", 0) == 0) {
      report.open(arg.substr(9));
    } else {
      std::cerr << "usage: acceptance [--only=N[,M...]] [--report=PATH]\n";
      return 2;
    }
  }
  const Criterion criteria[] = {
      {1, "end-to-end keygen+sign, internal and external verifier", EndToEnd},
      {2, "recovery pairings sign under the same Y", RecoveryEquivalence},
      {3, "key derivation across all pairings", Derivation},
      {4, "MtA / MtAwc correctness at 2048 bits", MtaCorrectness},
      {5, "ZKP completeness, perturbation soundness, extraction", ZkpSuite},
      {6, "abort-or-valid tamper sweep", TamperSweep},
      {7, "Paillier, Feldman and Lagrange identities", HomomorphicAndVss},
      {8, "production-size keygen+sign under 60 s", Performance},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Result res;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(res);
    } catch (const std::exception& e) {
      res.Fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && res.pass;
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.1f s", secs);
    std::ostringstream line;
    line << "criterion " << c.id << ": " << (res.pass ? "PASS" : "FAIL") << "  " << c.name
         << "  [" << res.detail.str() << "] (" << timing << ")";
    std::cout << line.str() << std::endl;
    if (report.is_open()) report << line.str() << std::endl;
  }
  return all ? 0 : 1;
}
