#include "support.hpp"

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/ecdsa.h>
#include <openssl/evp.h>
#include <openssl/param_build.h>

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "trecdsa/bigint.hpp"

namespace trecdsa::testing {
namespace {

template <typename T, void (*F)(T*)>
struct Free {
  void operator()(T* p) const { F(p); }
};
using ParamBld = std::unique_ptr<OSSL_PARAM_BLD, Free<OSSL_PARAM_BLD, OSSL_PARAM_BLD_free>>;
using Params = std::unique_ptr<OSSL_PARAM, Free<OSSL_PARAM, OSSL_PARAM_free>>;
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, Free<EVP_PKEY_CTX, EVP_PKEY_CTX_free>>;
using Pkey = std::unique_ptr<EVP_PKEY, Free<EVP_PKEY, EVP_PKEY_free>>;
using MdCtx = std::unique_ptr<EVP_MD_CTX, Free<EVP_MD_CTX, EVP_MD_CTX_free>>;
using EcdsaSig = std::unique_ptr<ECDSA_SIG, Free<ECDSA_SIG, ECDSA_SIG_free>>;

bool Verifies(const std::function<bool()>& verify) {
  try {
    return verify();
  } catch (const std::exception&) {
    return false;
  }
}

Point Bump(const Point& p) { return p + Point::Generator(p.curve()); }
Scalar Bump(const Scalar& s) { return s + Scalar::One(s.curve()); }
mpz_class Bump(const mpz_class& v) { return v + 1; }

Bytes BumpContext(ByteView context) {
  Bytes out(context.begin(), context.end());
  out.push_back(0x01);
  return out;
}

}  // namespace

bool ExternalVerify(const CurveConfig& config, const Point& public_key, ByteView message,
                    const Signature& signature) {
  const char* group = config.curve_id == CurveId::kSecp256k1 ? "secp256k1" : "prime256v1";
  const EVP_MD* md = config.hash_id == HashId::kSha256 ? EVP_sha256() : EVP_sha3_256();
  const Bytes pub = public_key.ToBytes();

  ParamBld bld(OSSL_PARAM_BLD_new());
  OSSL_PARAM_BLD_push_utf8_string(bld.get(), OSSL_PKEY_PARAM_GROUP_NAME, group, 0);
  OSSL_PARAM_BLD_push_octet_string(bld.get(), OSSL_PKEY_PARAM_PUB_KEY, pub.data(), pub.size());
  Params params(OSSL_PARAM_BLD_to_param(bld.get()));
  PkeyCtx ctx(EVP_PKEY_CTX_new_from_name(nullptr, "EC", nullptr));
  EVP_PKEY* raw_key = nullptr;
  if (EVP_PKEY_fromdata_init(ctx.get()) != 1 ||
      EVP_PKEY_fromdata(ctx.get(), &raw_key, EVP_PKEY_PUBLIC_KEY, params.get()) != 1) {
    return false;
  }
  Pkey key(raw_key);

  const Bytes r = signature.r.ToBytes();
  const Bytes s = signature.s.ToBytes();
  EcdsaSig sig(ECDSA_SIG_new());
  ECDSA_SIG_set0(sig.get(), BN_bin2bn(r.data(), static_cast<int>(r.size()), nullptr),
                 BN_bin2bn(s.data(), static_cast<int>(s.size()), nullptr));
  unsigned char* der = nullptr;
  const int der_len = i2d_ECDSA_SIG(sig.get(), &der);
  if (der_len <= 0) return false;

  MdCtx mctx(EVP_MD_CTX_new());
  bool ok = EVP_DigestVerifyInit(mctx.get(), nullptr, md, nullptr, key.get()) == 1 &&
            EVP_DigestVerify(mctx.get(), der, static_cast<std::size_t>(der_len),
                             message.data(), message.size()) == 1;
  OPENSSL_free(der);
  return ok;
}

TestKeys GenerateKeys(const ProtocolParams& params, Rng& rng) {
  RecoveryKeyPair p3 = RecoveryKeyPair::Generate(params.curve.curve(), rng);
  KeygenRun run = SimulateKeygen(params, p3.public_key, rng);
  if (!run.outcome.success) {
    throw std::runtime_error("keygen aborted: " + run.outcome.detail);
  }
  return TestKeys{params, std::move(p3), std::move(*run.p1), std::move(*run.p2)};
}

const TestKeys& SharedTinyKeys() {
  static const TestKeys keys = [] {
    Rng rng = Rng::FromSeed(std::uint64_t{0x5eed});
    return GenerateKeys(ProtocolParams::Tiny(), rng);
  }();
  return keys;
}

Scalar ReconstructSecret(const KeyShareRecord& p1, const KeyShareRecord& p2) {
  return Scalar(p1.x.curve(), 3L) * p1.x - Scalar(p1.x.curve(), 2L) * p2.x;
}

Scalar ReconstructP3Share(const KeyShareRecord& p1, const KeyShareRecord& p2) {
  return Scalar(p1.x.curve(), 2L) * p1.x - p2.x;
}

Bytes AsMessage(std::string_view text) { return Bytes(text.begin(), text.end()); }

// ------------------------------------------------------------ perturbation

std::vector<FieldCheck> PerturbSchnorr(const SchnorrProof& proof, const Point& x,
                                       ByteView context) {
  std::vector<FieldCheck> out;
  auto check = [&](std::string field, const SchnorrProof& p, const Point& stmt, ByteView ctx) {
    out.push_back({std::move(field), Verifies([&] { return SchnorrVerify(p, stmt, ctx); })});
  };
  SchnorrProof p = proof;
  p.u = Bump(proof.u);
  check("u", p, x, context);
  p = proof;
  p.c = Bump(proof.c);
  check("c", p, x, context);
  p = proof;
  p.z = Bump(proof.z);
  check("z", p, x, context);
  check("statement.X", proof, Bump(x), context);
  check("context", proof, x, BumpContext(context));
  return out;
}

std::vector<FieldCheck> PerturbFactorization(const FactorizationProof& proof, const mpz_class& n,
                                             ByteView context) {
  std::vector<FieldCheck> out;
  auto check = [&](std::string field, const FactorizationProof& p, const mpz_class& modulus,
                   ByteView ctx) {
    out.push_back(
        {std::move(field), Verifies([&] { return VerifyFactorization(p, modulus, ctx); })});
  };
  for (std::size_t j = 0; j < proof.commitments.size(); ++j) {
    for (std::size_t i = 0; i < proof.commitments[j].size(); ++i) {
      FactorizationProof p = proof;
      p.commitments[j][i] = Bump(p.commitments[j][i]);
      check("x[" + std::to_string(j) + "][" + std::to_string(i) + "]", p, n, context);
    }
  }
  for (std::size_t j = 0; j < proof.challenges.size(); ++j) {
    FactorizationProof p = proof;
    p.challenges[j] = Bump(p.challenges[j]);
    check("e[" + std::to_string(j) + "]", p, n, context);
  }
  for (std::size_t j = 0; j < proof.responses.size(); ++j) {
    FactorizationProof p = proof;
    p.responses[j] = Bump(p.responses[j]);
    check("y[" + std::to_string(j) + "]", p, n, context);
  }
  check("statement.N", proof, n + 2, context);
  check("context", proof, n, BumpContext(context));
  return out;
}

std::vector<FieldCheck> PerturbInitiatorRange(const InitiatorRangeProof& proof,
                                              const Curve& curve, const PaillierPublicKey& pk,
                                              const AuxRsaParams& aux,
                                              const PaillierCiphertext& c, ByteView context) {
  std::vector<FieldCheck> out;
  auto check = [&](std::string field, const InitiatorRangeProof& p, const PaillierCiphertext& ct,
                   ByteView ctx) {
    out.push_back({std::move(field),
                   Verifies([&] { return VerifyInitiatorRange(p, curve, pk, aux, ct, ctx); })});
  };
  mpz_class InitiatorRangeProof::*fields[] = {
      &InitiatorRangeProof::z, &InitiatorRangeProof::u,  &InitiatorRangeProof::w,
      &InitiatorRangeProof::s, &InitiatorRangeProof::s1, &InitiatorRangeProof::s2};
  const char* names[] = {"z", "u", "w", "s", "s1", "s2"};
  for (std::size_t i = 0; i < std::size(fields); ++i) {
    InitiatorRangeProof p = proof;
    p.*fields[i] = Bump(p.*fields[i]);
    check(names[i], p, c, context);
  }
  check("statement.c", proof, PaillierCiphertext{Mod(c.value * 2, pk.n_squared())}, context);
  check("context", proof, c, BumpContext(context));
  return out;
}

std::vector<FieldCheck> PerturbRespondentRange(const RespondentRangeProof& proof,
                                               const Curve& curve, const PaillierPublicKey& pk,
                                               const AuxRsaParams& aux,
                                               const PaillierCiphertext& c1,
                                               const PaillierCiphertext& c2,
                                               const std::optional<Point>& b_point,
                                               ByteView context) {
  std::vector<FieldCheck> out;
  auto check = [&](std::string field, const RespondentRangeProof& p,
                   const PaillierCiphertext& a, const PaillierCiphertext& b,
                   const std::optional<Point>& bp, ByteView ctx) {
    out.push_back({std::move(field), Verifies([&] {
                     return VerifyRespondentRange(p, curve, pk, aux, a, b, bp, ctx);
                   })});
  };
  mpz_class RespondentRangeProof::*fields[] = {
      &RespondentRangeProof::z,  &RespondentRangeProof::z_prime, &RespondentRangeProof::t,
      &RespondentRangeProof::v,  &RespondentRangeProof::w,       &RespondentRangeProof::s,
      &RespondentRangeProof::s1, &RespondentRangeProof::s2,      &RespondentRangeProof::t1,
      &RespondentRangeProof::t2};
  const char* names[] = {"z", "z'", "t", "v", "w", "s", "s1", "s2", "t1", "t2"};
  for (std::size_t i = 0; i < std::size(fields); ++i) {
    RespondentRangeProof p = proof;
    p.*fields[i] = Bump(p.*fields[i]);
    check(names[i], p, c1, c2, b_point, context);
  }
  if (proof.u) {
    RespondentRangeProof p = proof;
    p.u = Bump(*p.u);
    check("u", p, c1, c2, b_point, context);
  }
  const auto twice = [&](const PaillierCiphertext& c) {
    return PaillierCiphertext{Mod(c.value * 2, pk.n_squared())};
  };
  check("statement.c1", proof, twice(c1), c2, b_point, context);
  check("statement.c2", proof, c1, twice(c2), b_point, context);
  if (b_point) check("statement.X", proof, c1, c2, Bump(*b_point), context);
  check("context", proof, c1, c2, b_point, BumpContext(context));
  return out;
}

std::vector<FieldCheck> PerturbPartialSignature(const PartialSignatureProof& proof,
                                                const Point& big_r, const Point& w,
                                                const Point& z, ByteView context) {
  std::vector<FieldCheck> out;
  auto check = [&](std::string field, const PartialSignatureProof& p, const Point& r,
                   const Point& ww, const Point& zz, ByteView ctx) {
    out.push_back(
        {std::move(field), Verifies([&] { return VerifyPartialSignature(p, r, ww, zz, ctx); })});
  };
  PartialSignatureProof p = proof;
  p.a_w = Bump(p.a_w);
  check("a_w", p, big_r, w, z, context);
  p = proof;
  p.a_z = Bump(p.a_z);
  check("a_z", p, big_r, w, z, context);
  p = proof;
  p.c = Bump(p.c);
  check("c", p, big_r, w, z, context);
  p = proof;
  p.t_s = Bump(p.t_s);
  check("t_s", p, big_r, w, z, context);
  p = proof;
  p.t_l = Bump(p.t_l);
  check("t_l", p, big_r, w, z, context);
  p = proof;
  p.t_rho = Bump(p.t_rho);
  check("t_rho", p, big_r, w, z, context);
  check("statement.R", proof, Bump(big_r), w, z, context);
  check("statement.W", proof, big_r, Bump(w), z, context);
  check("statement.Z", proof, big_r, w, Bump(z), context);
  check("context", proof, big_r, w, z, BumpContext(context));
  return out;
}

// ------------------------------------------------------------ tamper sweep

std::string_view SweepTargetName(SweepTarget target) {
  switch (target) {
    case SweepTarget::kKeygen: return "keygen";
    case SweepTarget::kSign: return "sign";
    case SweepTarget::kRecovery13: return "recovery13";
    case SweepTarget::kRecovery23: return "recovery23";
  }
  return "?";
}

std::vector<AbortCode> ExpectedAbortCodes(MessageKind kind, TamperAction action) {
  using A = AbortCode;
  if (action == TamperAction::kDrop) return {A::kTimeout};
  std::vector<AbortCode> codes = {A::kMalformedMessage};
  auto add = [&](std::initializer_list<AbortCode> more) {
    codes.insert(codes.end(), more.begin(), more.end());
  };
  switch (kind) {
    case MessageKind::kKeygenCommit:
      add({A::kKeygenDecommitment, A::kPaillierKeyRejected, A::kAuxParamsRejected,
           A::kSchnorrProof, A::kFactorizationProof});
      break;
    case MessageKind::kKeygenDecommit:
      add({A::kKeygenDecommitment, A::kVssShare, A::kSchnorrProof, A::kFactorizationProof,
           A::kPublicKeyMismatch});
      break;
    case MessageKind::kKeygenShare: add({A::kVssShare}); break;
    case MessageKind::kKeygenProof: add({A::kSchnorrProof, A::kFactorizationProof}); break;
    case MessageKind::kRecoveryBundle:
      add({A::kRecoveryDecrypt, A::kRecoveryInconsistent, A::kPublicKeyMismatch,
           A::kPaillierKeyRejected, A::kAuxParamsRejected, A::kSchnorrProof,
           A::kFactorizationProof});
      break;
    case MessageKind::kRecoveryHello:
      add({A::kPaillierKeyRejected, A::kAuxParamsRejected, A::kSchnorrProof,
           A::kFactorizationProof});
      break;
    case MessageKind::kRecoveryProof: add({A::kSchnorrProof, A::kFactorizationProof}); break;
    case MessageKind::kSignCommit: add({A::kSignDecommitment}); break;
    case MessageKind::kSignMtaInit: add({A::kRangeProofInitiator}); break;
    case MessageKind::kSignMtaResponse: add({A::kRangeProofRespondent}); break;
    case MessageKind::kSignDelta:
      // A wrong delta gives the receiver a different R, which the peer's
      // proof for W (made over the real R) no longer matches.
      add({A::kDegenerateNonce, A::kPartialSignatureProof, A::kCheckMismatch});
      break;
    case MessageKind::kSignDecommit: add({A::kSignDecommitment, A::kSchnorrProof}); break;
    case MessageKind::kSignCheckCommit: add({A::kCheckDecommitment}); break;
    case MessageKind::kSignCheckDecommit:
      add({A::kCheckDecommitment, A::kPartialSignatureProof});
      break;
    case MessageKind::kSignCheckCommit2: add({A::kCheckDecommitment}); break;
    case MessageKind::kSignCheckDecommit2:
      add({A::kCheckDecommitment, A::kCheckMismatch});
      break;
    case MessageKind::kSignShare: add({A::kInvalidSignature}); break;
    default: break;
  }
  return codes;
}

bool SweepCase::ok() const {
  if (outcome.success) return valid_signature;
  return reason_expected && !honest_share_leaked;
}

std::string SweepCase::Describe() const {
  std::ostringstream out;
  out << rule.Describe() << " -> ";
  if (outcome.success) {
    out << (valid_signature ? "success(valid)" : "success(INVALID)");
  } else {
    out << "abort " << AbortCodeName(outcome.code) << " round " << outcome.abort_round;
    if (!reason_expected) out << " (unexpected reason: " << outcome.detail << ")";
    if (honest_share_leaked) out << " (HONEST SHARE LEAKED)";
  }
  return out.str();
}

namespace {

struct SweepRun {
  SessionOutcome outcome;
  bool valid = false;
};

SweepRun RunTarget(SweepTarget target, const TestKeys& keys, Rng& rng,
                   const SimulationOptions& options) {
  const Bytes message = AsMessage("tamper sweep");
  SweepRun out;
  switch (target) {
    case SweepTarget::kKeygen: {
      KeygenRun run = SimulateKeygen(keys.params, keys.p3.public_key, rng, options);
      out.outcome = std::move(run.outcome);
      if (out.outcome.success) {
        const Point y = run.p1->public_key;
        out.valid = y == run.p2->public_key &&
                    Point::BaseMul(ReconstructSecret(*run.p1, *run.p2)) == y;
      }
      return out;
    }
    case SweepTarget::kSign:
    case SweepTarget::kRecovery13:
    case SweepTarget::kRecovery23: {
      SignRun run;
      if (target == SweepTarget::kSign) {
        run = SimulateSign(keys.p1, keys.p2, keys.params, message, std::nullopt, rng, options);
      } else {
        const KeyShareRecord& online = target == SweepTarget::kRecovery13 ? keys.p1 : keys.p2;
        run = SimulateRecoverySign(online, keys.p3, keys.params, message, std::nullopt, rng,
                                   options);
      }
      out.outcome = std::move(run.outcome);
      if (out.outcome.success && run.signature) {
        out.valid = EcdsaVerify(keys.p1.config, keys.p1.public_key, message, *run.signature) &&
                    ExternalVerify(keys.p1.config, keys.p1.public_key, message, *run.signature);
      }
      return out;
    }
  }
  return out;
}

}  // namespace

std::vector<SweepCase> RunTamperSweep(SweepTarget target, const TestKeys& keys, Rng& rng) {
  SimulationOptions honest_options;
  honest_options.max_attempts = 1;
  const SweepRun honest = RunTarget(target, keys, rng, honest_options);
  if (!honest.outcome.success || !honest.valid) {
    throw std::runtime_error("honest run failed: " + honest.outcome.detail);
  }

  std::map<std::tuple<PartyId, std::uint8_t, MessageKind>, std::size_t> schedule;
  for (const Envelope& e : honest.outcome.transcript) {
    if (e.kind == MessageKind::kAbort || e.kind == MessageKind::kRoundEnd) continue;
    schedule[{e.sender, e.round, e.kind}] = e.payload.size();
  }

  std::vector<SweepCase> cases;
  for (const auto& [key, size] : schedule) {
    const auto& [sender, round, kind] = key;
    std::vector<TamperRule> rules;
    TamperRule base;
    base.sender = sender;
    base.round = round;
    base.kind = kind;

    TamperRule drop = base;
    drop.action = TamperAction::kDrop;
    rules.push_back(drop);
    TamperRule replace = base;
    replace.action = TamperAction::kReplacePayload;
    replace.replacement = rng.RandomBytes(size);
    rules.push_back(replace);
    for (std::size_t offset : {std::size_t{0}, size / 2, size - 1}) {
      TamperRule flip = base;
      flip.action = TamperAction::kFlipByte;
      flip.offset = offset;
      rules.push_back(flip);
    }

    for (const TamperRule& rule : rules) {
      SimulationOptions options;
      options.tamper = {rule};
      options.max_attempts = 1;
      SweepRun run = RunTarget(target, keys, rng, options);
      SweepCase c;
      c.rule = rule;
      c.outcome = std::move(run.outcome);
      c.valid_signature = run.valid;
      if (!c.outcome.success) {
        const auto expected = ExpectedAbortCodes(kind, rule.action);
        c.reason_expected =
            std::find(expected.begin(), expected.end(), c.outcome.code) != expected.end();
        if (kind != MessageKind::kSignShare) {
          for (const Envelope& e : c.outcome.transcript) {
            if (e.kind == MessageKind::kSignShare && e.sender != sender) {
              c.honest_share_leaked = true;
            }
          }
        }
      }
      cases.push_back(std::move(c));
    }
  }
  return cases;
}

}  // namespace trecdsa::testing
