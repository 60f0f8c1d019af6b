// trecdsa: key setup, distributed key generation, signing, recovery signing,
// key derivation and verification from the command line.
//
// Exit codes: 0 success (or a valid signature for `verify`), 1 invalid
// signature, 2 usage or I/O error, 3 protocol abort.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "trecdsa/abort.hpp"
#include "trecdsa/algebra.hpp"
#include "trecdsa/keystore.hpp"
#include "trecdsa/protocol/keygen.hpp"
#include "trecdsa/protocol/params.hpp"
#include "trecdsa/protocol/recovery.hpp"
#include "trecdsa/protocol/sign.hpp"
#include "trecdsa/transport/simulator.hpp"
#include "trecdsa/transport/socket.hpp"

namespace trecdsa {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitError = 2;
constexpr int kExitAbort = 3;

constexpr const char* kPassphraseEnv = "TRECDSA_KEYSTORE_PASSPHRASE";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int g_verbosity = 0;

void Log(int level, const std::string& line) {
  if (g_verbosity >= level) std::cerr << "[trecdsa] " << line << "\n";
}

std::optional<std::string> Passphrase() {
  const char* value = std::getenv(kPassphraseEnv);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

struct SizeFlags {
  std::string profile;
  std::size_t paillier_bits = 0;
  std::size_t aux_bits = 0;
  bool no_range_proofs = false;
  bool allow_insecure = false;

  void Register(CLI::App* cmd) {
    cmd->add_option("--profile", profile, "Size profile: production, test or tiny")
        ->check(CLI::IsMember({"production", "test", "tiny"}));
    cmd->add_option("--paillier-bits", paillier_bits, "Paillier modulus size");
    cmd->add_option("--aux-bits", aux_bits, "Auxiliary RSA modulus size for range proofs");
    cmd->add_flag("--no-range-proofs", no_range_proofs,
                  "Skip MtA range proofs (insecure against a malicious peer)");
    cmd->add_flag("--allow-insecure", allow_insecure, "Permit moduli below 2048 bits");
  }

  /// Flags override the profile, which overrides `fallback`.
  ProtocolParams Resolve(const CurveConfig& curve, const ProtocolParams& fallback) const {
    ProtocolParams p = profile.empty() ? fallback : ProtocolParams::FromProfileName(profile);
    p.curve = curve;
    if (paillier_bits != 0) p.paillier_bits = paillier_bits;
    if (aux_bits != 0) p.aux_bits = aux_bits;
    if (no_range_proofs) p.mta.range_proofs = false;
    if (p.IsInsecure() && !allow_insecure) {
      throw UsageError("moduli below 2048 bits require --allow-insecure");
    }
    if (p.IsInsecure()) Log(0, "warning: insecure modulus sizes (test use only)");
    if (!p.mta.range_proofs) Log(0, "warning: range proofs disabled");
    return p;
  }
};

struct MessageFlags {
  std::string text;
  std::string hex;
  std::string file;

  void Register(CLI::App* cmd) {
    auto* t = cmd->add_option("--message", text, "Message as text");
    auto* h = cmd->add_option("--message-hex", hex, "Message as hex");
    auto* f = cmd->add_option("--message-file", file, "Read the message from a file");
    t->excludes(h)->excludes(f);
    h->excludes(f);
  }

  Bytes Get(const CLI::App* cmd) const {
    if (cmd->count("--message") > 0) return Bytes(text.begin(), text.end());
    if (cmd->count("--message-hex") > 0) return FromHex(hex);
    if (cmd->count("--message-file") > 0) return ReadFileBytes(file);
    throw UsageError("one of --message, --message-hex, --message-file is required");
  }
};

struct SocketFlags {
  std::string mode = "sim";
  std::string listen;
  std::string connect;
  int role = 0;
  int timeout_s = 30;

  void Register(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "sim (all parties in-process) or socket")
        ->check(CLI::IsMember({"sim", "socket"}));
    cmd->add_option("--role", role, "This process's party in socket mode (1, 2 or 3)")
        ->check(CLI::Range(1, 3));
    cmd->add_option("--listen", listen, "host:port to accept the peer on");
    cmd->add_option("--connect", connect, "host:port of the listening peer");
    cmd->add_option("--timeout", timeout_s, "Per-round timeout in seconds (socket mode)");
  }

  bool socket() const { return mode == "socket"; }

  FramedChannel Open() const {
    if (listen.empty() == connect.empty()) {
      throw UsageError("socket mode needs exactly one of --listen, --connect");
    }
    const auto timeout = std::chrono::seconds(timeout_s);
    if (!listen.empty()) {
      const auto [host, port] = ParseAddress(listen);
      Log(1, "waiting for peer on " + listen);
      return ListenOnce(host, port, timeout * 10);
    }
    const auto [host, port] = ParseAddress(connect);
    Log(1, "connecting to " + connect);
    return ConnectTo(host, port, timeout);
  }
};

Rng MakeRng(const std::optional<std::uint64_t>& seed) {
  if (seed) {
    Log(0, "warning: --seed makes every secret reproducible; use only for tests");
    return Rng::FromSeed(*seed);
  }
  return Rng::FromSystem();
}

PartyId RoleFromInt(int role) {
  switch (role) {
    case 1: return PartyId::kP1;
    case 2: return PartyId::kP2;
    case 3: return PartyId::kP3;
    default: throw UsageError("--role must be 1, 2 or 3");
  }
}

PartyId ParsePartyName(const std::string& s) {
  if (s == "1" || s == "P1" || s == "p1") return PartyId::kP1;
  if (s == "2" || s == "P2" || s == "p2") return PartyId::kP2;
  if (s == "3" || s == "P3" || s == "p3") return PartyId::kP3;
  throw UsageError("unknown party: " + s);
}

/// "sender=P1,round=2,kind=keygen_decommit,action=flip,offset=4"; action is
/// drop, flip or replace (with payload=<hex>).
TamperRule ParseTamper(const std::string& spec) {
  TamperRule rule;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("bad --tamper item: " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "sender") {
      rule.sender = ParsePartyName(value);
    } else if (key == "round") {
      rule.round = static_cast<std::uint8_t>(std::stoul(value));
    } else if (key == "kind") {
      try {
        rule.kind = MessageKindFromName(value);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    } else if (key == "action") {
      if (value == "drop") {
        rule.action = TamperAction::kDrop;
      } else if (value == "flip") {
        rule.action = TamperAction::kFlipByte;
      } else if (value == "replace") {
        rule.action = TamperAction::kReplacePayload;
      } else {
        throw UsageError("unknown tamper action: " + value);
      }
    } else if (key == "offset") {
      rule.offset = std::stoul(value);
    } else if (key == "payload") {
      rule.replacement = FromHex(value);
    } else {
      throw UsageError("unknown --tamper key: " + key);
    }
  }
  return rule;
}

int ReportAbort(const SessionOutcome& outcome) {
  std::cout << "abort: " << AbortCodeName(outcome.code) << "\n";
  std::cerr << "protocol aborted: reason=" << AbortCodeName(outcome.code)
            << " round=" << outcome.abort_round;
  if (outcome.aborted_by) std::cerr << " detected_by=" << PartyName(*outcome.aborted_by);
  std::cerr << " (" << outcome.detail << ")\n";
  return kExitAbort;
}

void LogTranscript(const SessionOutcome& outcome) {
  if (g_verbosity < 2) return;
  for (const Envelope& e : outcome.transcript) {
    Log(2, "msg round=" + std::to_string(e.round) + " " + std::string(PartyName(e.sender)) +
               "->" + std::string(PartyName(e.recipient)) + " " +
               std::string(MessageKindName(e.kind)) + " " + std::to_string(e.payload.size()) +
               " bytes");
  }
}

KeyShareRecord LoadShare(const std::string& path) {
  Log(1, "loading key share " + path);
  return LoadKeyShare(ReadFileBytes(path), Passphrase());
}

RecoveryKeyPair LoadP3(const std::string& path) {
  Log(1, "loading recovery key " + path);
  return LoadRecoveryKey(ReadFileBytes(path), Passphrase());
}

void SaveShare(const std::string& path, const KeyShareRecord& record, Rng& rng) {
  SealOptions seal;
  seal.passphrase = Passphrase();
  WriteFileBytes(path, SaveKeyShare(record, seal, rng));
  Log(1, std::string("wrote ") + (seal.passphrase ? "sealed " : "") + "key share for " +
             std::string(PartyName(record.role)) + " to " + path);
}

Point ReadRecoveryPublicKey(const std::string& file, const std::string& hex,
                            const Curve& curve) {
  if (!hex.empty()) return Point::FromBytes(curve, FromHex(hex));
  if (!file.empty()) return LoadRecoveryPublicKey(ReadFileBytes(file));
  throw UsageError("keygen needs --recovery-key or --recovery-pubkey");
}

void PrintSignature(const Point& public_key, const Signature& raw, bool low_s) {
  const Signature sig = low_s ? raw.NormalizedLowS() : raw;
  std::cout << "public_key: " << ToHex(public_key.ToBytes()) << "\n";
  std::cout << "r: " << ToHex(sig.r.ToBytes()) << "\n";
  std::cout << "s: " << ToHex(sig.s.ToBytes()) << "\n";
  std::cout << "signature: " << ToHex(sig.ToCompact()) << "\n";
  std::cout << "der: " << ToHex(sig.ToDer()) << "\n";
}

// ---------------------------------------------------------------- setup

struct SetupCmd {
  std::string out;
  std::string curve = "secp256k1";
  std::optional<std::uint64_t> seed;

  int Run() const {
    const CurveConfig config{CurveIdFromName(curve), HashId::kSha256};
    Rng rng = MakeRng(seed);
    const RecoveryKeyPair keys = RecoveryKeyPair::Generate(config.curve(), rng);
    SealOptions seal;
    seal.passphrase = Passphrase();
    WriteFileBytes(out, SaveRecoveryKey(config, keys, seal, rng));
    std::cout << "recovery_public_key: " << ToHex(keys.public_key.ToBytes()) << "\n";
    return kExitOk;
  }
};

// --------------------------------------------------------------- keygen

struct KeygenCmd {
  SizeFlags sizes;
  SocketFlags net;
  std::vector<std::string> keystores;
  std::string recovery_key_file;
  std::string recovery_pubkey;
  std::string curve = "secp256k1";
  std::vector<std::string> tamper;
  std::optional<std::uint64_t> seed;

  int Run() const {
    const CurveConfig config{CurveIdFromName(curve), HashId::kSha256};
    const ProtocolParams params = sizes.Resolve(config, ProtocolParams::Production());
    const Point pk3 = ReadRecoveryPublicKey(recovery_key_file, recovery_pubkey, config.curve());
    Rng rng = MakeRng(seed);
    Rng store_rng = rng.Fork("keystore");

    if (net.socket()) {
      if (keystores.size() != 1) throw UsageError("socket mode takes one --keystore");
      if (net.role != 1 && net.role != 2) throw UsageError("keygen --role must be 1 or 2");
      FramedChannel channel = net.Open();
      const SessionId session = AgreeSessionId(channel, !net.listen.empty(), rng);
      KeygenParty party(RoleFromInt(net.role), params, pk3, session, rng.Fork("party"));
      const SessionOutcome outcome =
          RunRemoteSession(party, session, channel, std::chrono::seconds(net.timeout_s));
      LogTranscript(outcome);
      if (!outcome.success) return ReportAbort(outcome);
      SaveShare(keystores[0], *party.result(), store_rng);
      std::cout << "public_key: " << ToHex(party.result()->public_key.ToBytes()) << "\n";
      return kExitOk;
    }

    if (keystores.size() != 2) {
      throw UsageError("simulator keygen needs two --keystore paths (P1 first, then P2)");
    }
    SimulationOptions options;
    options.run.threaded = true;
    for (const std::string& t : tamper) options.tamper.push_back(ParseTamper(t));
    Log(1, "running key generation in-process");
    const KeygenRun run = SimulateKeygen(params, pk3, rng, options);
    LogTranscript(run.outcome);
    if (!run.outcome.success) return ReportAbort(run.outcome);
    SaveShare(keystores[0], *run.p1, store_rng);
    SaveShare(keystores[1], *run.p2, store_rng);
    std::cout << "public_key: " << ToHex(run.p1->public_key.ToBytes()) << "\n";
    return kExitOk;
  }
};

// ----------------------------------------------------------------- sign

Pairing ParsePairing(int value) {
  switch (value) {
    case 12: return Pairing::k12;
    case 13: return Pairing::k13;
    case 23: return Pairing::k23;
    default: throw UsageError("--pairing must be 12, 13 or 23");
  }
}

ProtocolParams ParamsFromRecord(const KeyShareRecord& record) {
  ProtocolParams p;
  p.curve = record.config;
  p.paillier_bits = record.paillier.public_key().bits();
  p.aux_bits = record.aux.bits();
  return p;
}

struct SignCmd {
  SizeFlags sizes;
  SocketFlags net;
  MessageFlags message_flags;
  std::vector<std::string> keystores;
  std::string p3_keystore;
  int pairing_value = 12;
  std::optional<std::uint32_t> derive_index;
  bool low_s = false;
  std::vector<std::string> tamper;
  std::optional<std::uint64_t> seed;
  const CLI::App* cmd = nullptr;

  int Run() const {
    const Pairing pairing = ParsePairing(pairing_value);
    const Bytes message = message_flags.Get(cmd);
    Rng rng = MakeRng(seed);
    return net.socket() ? RunSocket(pairing, message, rng) : RunSim(pairing, message, rng);
  }

  int RunSim(Pairing pairing, const Bytes& message, Rng& rng) const {
    std::vector<KeyShareRecord> shares;
    for (const std::string& path : keystores) shares.push_back(LoadShare(path));
    SimulationOptions options;
    options.run.threaded = true;
    for (const std::string& t : tamper) options.tamper.push_back(ParseTamper(t));

    SignRun run;
    if (pairing == Pairing::k12) {
      if (shares.size() != 2 || shares[0].role == shares[1].role) {
        throw UsageError("pairing 12 needs the P1 and the P2 keystore");
      }
      if (shares[0].role != PartyId::kP1) std::swap(shares[0], shares[1]);
      const ProtocolParams params = sizes.Resolve(shares[0].config, ParamsFromRecord(shares[0]));
      Log(1, "ordinary signing P1+P2");
      run = SimulateSign(shares[0], shares[1], params, message, derive_index, rng, options);
    } else {
      const PartyId online = PairingParties(pairing).first;
      if (shares.size() != 1 || shares[0].role != online) {
        throw UsageError("pairing " + std::to_string(pairing_value) + " needs the " +
                         std::string(PartyName(online)) + " keystore and --p3-keystore");
      }
      if (p3_keystore.empty()) throw UsageError("recovery signing needs --p3-keystore");
      const RecoveryKeyPair keys = LoadP3(p3_keystore);
      const ProtocolParams params = sizes.Resolve(shares[0].config, ParamsFromRecord(shares[0]));
      Log(1, "recovery signing " + std::string(PartyName(online)) + "+P3");
      run = SimulateRecoverySign(shares[0], keys, params, message, derive_index, rng, options);
    }
    LogTranscript(run.outcome);
    Log(1, "attempts: " + std::to_string(run.attempts));
    if (!run.outcome.success || !run.signature) return ReportAbort(run.outcome);
    PrintSignature(*run.public_key, *run.signature, low_s);
    return kExitOk;
  }

  int RunSocket(Pairing pairing, const Bytes& message, Rng& rng) const {
    const PartyId self = RoleFromInt(net.role);
    const auto [a, b] = PairingParties(pairing);
    if (self != a && self != b) throw UsageError("--role is not part of --pairing");
    const RecoveryRequest request{message, derive_index};

    std::unique_ptr<Party> party;
    std::function<std::optional<Signature>()> result;
    std::function<std::optional<Point>()> public_key;
    std::optional<KeyShareRecord> record;
    std::optional<ProtocolParams> params;
    std::optional<RecoveryKeyPair> keys;

    if (self == PartyId::kP3) {
      if (p3_keystore.empty()) throw UsageError("role 3 needs --p3-keystore");
      keys = LoadP3(p3_keystore);
      params = sizes.Resolve(CurveConfig{keys->secret.curve().id(), HashId::kSha256},
                             ProtocolParams::Production());
    } else {
      if (keystores.size() != 1) throw UsageError("socket mode takes one --keystore");
      record = LoadShare(keystores[0]);
      if (record->role != self) throw UsageError("keystore does not belong to --role");
      params = sizes.Resolve(record->config, ParamsFromRecord(*record));
    }

    FramedChannel channel = net.Open();
    const SessionId session = AgreeSessionId(channel, !net.listen.empty(), rng);

    if (pairing == Pairing::k12) {
      auto p = std::make_unique<SignParty>(OrdinarySigningShare(*record, derive_index),
                                           params->mta, message, session, rng.Fork("party"));
      result = [raw = p.get()] { return raw->result(); };
      party = std::move(p);
    } else if (self == PartyId::kP3) {
      auto p = std::make_unique<RecoveryP3Party>(*keys, a, *params, request, session,
                                                 rng.Fork("party"));
      result = [raw = p.get()] { return raw->result(); };
      public_key = [raw = p.get(), this, cfg = params->curve]() -> std::optional<Point> {
        const auto& rec = raw->recovered();
        if (!rec) return std::nullopt;
        if (!derive_index) return rec->public_key;
        return DerivePublicKey(cfg, rec->public_key, rec->derivation_secret, *derive_index);
      };
      party = std::move(p);
    } else {
      auto p = std::make_unique<RecoveryOnlineParty>(*record, *params, request, session,
                                                     rng.Fork("party"));
      result = [raw = p.get()] { return raw->result(); };
      party = std::move(p);
    }
    if (record) {
      const Point y = record->public_key;
      public_key = [y, this, cfg = record->config, d = record->derivation_secret] {
        return std::optional<Point>(derive_index ? DerivePublicKey(cfg, y, d, *derive_index)
                                                 : y);
      };
    }

    const SessionOutcome outcome =
        RunRemoteSession(*party, session, channel, std::chrono::seconds(net.timeout_s));
    LogTranscript(outcome);
    if (!outcome.success || !result()) return ReportAbort(outcome);
    PrintSignature(*public_key(), *result(), low_s);
    return kExitOk;
  }
};

// --------------------------------------------------------------- derive

struct DeriveCmd {
  std::string keystore;
  std::vector<std::uint32_t> indices;

  int Run() const {
    const KeyShareRecord record = LoadShare(keystore);
    std::cout << "public_key: " << ToHex(record.public_key.ToBytes()) << "\n";
    for (std::uint32_t i : indices) {
      const Point yi =
          DerivePublicKey(record.config, record.public_key, record.derivation_secret, i);
      std::cout << "public_key[" << i << "]: " << ToHex(yi.ToBytes()) << "\n";
    }
    return kExitOk;
  }
};

// --------------------------------------------------------------- recover

// P3 checks that it can rebuild x_3 from a key-holder's published recovery
// material. Only public values are printed.
struct RecoverCmd {
  std::string p3_keystore;
  std::string keystore;
  std::vector<std::uint32_t> indices;

  int Run() const {
    const RecoveryKeyPair keys = LoadP3(p3_keystore);
    const KeystoreContents contents = DecodeKeystore(ReadFileBytes(keystore), std::nullopt);
    if (contents.kind != KeystoreKind::kKeyShare) throw UsageError("not a key share keystore");
    const RecoveryMaterial m = RecoveryMaterial::FromPublic(contents.public_part);
    if (!(m.recovery_key == keys.public_key)) {
      throw UsageError("keystore was generated for a different recovery key");
    }
    const RecoveredShare share =
        RecoverP3Share(keys, m.public_key, m.public_data, m.rec13, m.rec23);
    std::cout << "public_key: " << ToHex(share.public_key.ToBytes()) << "\n";
    std::cout << "share_point: " << ToHex(Point::BaseMul(share.x3).ToBytes()) << "\n";
    for (std::uint32_t i : indices) {
      const Point yi =
          DerivePublicKey(m.config, share.public_key, share.derivation_secret, i);
      std::cout << "public_key[" << i << "]: " << ToHex(yi.ToBytes()) << "\n";
    }
    std::cout << "recovery: ok\n";
    return kExitOk;
  }
};

// --------------------------------------------------------------- verify

struct VerifyCmd {
  std::string public_key;
  std::string signature;
  std::string curve = "secp256k1";
  MessageFlags message_flags;
  const CLI::App* cmd = nullptr;

  int Run() const {
    const CurveConfig config{CurveIdFromName(curve), HashId::kSha256};
    const Bytes message = message_flags.Get(cmd);
    const Point y = Point::FromBytes(config.curve(), FromHex(public_key));
    const Bytes sig_bytes = FromHex(signature);
    const Signature sig = sig_bytes.size() == 2 * kScalarBytes
                              ? Signature::FromCompact(config.curve(), sig_bytes)
                              : Signature::FromDer(config.curve(), sig_bytes);
    const bool ok = EcdsaVerify(config, y, message, sig);
    std::cout << (ok ? "valid" : "invalid") << "\n";
    return ok ? kExitOk : kExitInvalid;
  }
};

int Main(int argc, char** argv) {
  CLI::App app{"(2,3)-threshold ECDSA with an offline recovery party"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_flag("-v,--verbose", g_verbosity, "More diagnostics on stderr (repeatable)");
  app.add_option("--threads", threads, "OpenMP threads for number-theory kernels");

  SetupCmd setup;
  auto* setup_cmd = app.add_subcommand("setup", "Create P3's long-term recovery key");
  setup_cmd->add_option("--out", setup.out, "Recovery keystore path")->required();
  setup_cmd->add_option("--curve", setup.curve, "secp256k1 or prime256v1");
  setup_cmd->add_option("--seed", setup.seed, "Deterministic randomness (tests only)");

  KeygenCmd keygen;
  auto* keygen_cmd = app.add_subcommand("keygen", "Distributed key generation of P1 and P2");
  keygen.sizes.Register(keygen_cmd);
  keygen.net.Register(keygen_cmd);
  keygen_cmd->add_option("--keystore", keygen.keystores, "Output keystore(s)")->required();
  keygen_cmd->add_option("--recovery-key", keygen.recovery_key_file, "P3 recovery keystore");
  keygen_cmd->add_option("--recovery-pubkey", keygen.recovery_pubkey, "pk_3 as hex");
  keygen_cmd->add_option("--curve", keygen.curve, "secp256k1 or prime256v1");
  keygen_cmd->add_option("--tamper", keygen.tamper, "Tamper rule (simulator only)");
  keygen_cmd->add_option("--seed", keygen.seed, "Deterministic randomness (tests only)");

  SignCmd sign;
  auto* sign_cmd = app.add_subcommand("sign", "Two-party signing for a pairing");
  sign.sizes.Register(sign_cmd);
  sign.net.Register(sign_cmd);
  sign.message_flags.Register(sign_cmd);
  sign.cmd = sign_cmd;
  sign_cmd->add_option("--keystore", sign.keystores, "Key share keystore(s)");
  sign_cmd->add_option("--p3-keystore", sign.p3_keystore, "P3 recovery keystore");
  sign_cmd->add_option("--pairing", sign.pairing_value, "12, 13 or 23");
  sign_cmd->add_option("--derive-index", sign.derive_index, "Sign under the derived key Y^i");
  sign_cmd->add_flag("--low-s", sign.low_s, "Normalize s to the lower half");
  sign_cmd->add_option("--tamper", sign.tamper, "Tamper rule (simulator only)");
  sign_cmd->add_option("--seed", sign.seed, "Deterministic randomness (tests only)");

  DeriveCmd derive;
  auto* derive_cmd = app.add_subcommand("derive", "Print the public key and derived keys");
  derive_cmd->add_option("--keystore", derive.keystore, "P1 or P2 keystore")->required();
  derive_cmd->add_option("--index", derive.indices, "Derivation index (repeatable)");

  RecoverCmd recover;
  auto* recover_cmd =
      app.add_subcommand("recover", "P3: check recovery of x_3 from a key-holder's keystore");
  recover_cmd->add_option("--p3-keystore", recover.p3_keystore, "P3 recovery keystore")
      ->required();
  recover_cmd->add_option("--keystore", recover.keystore, "P1 or P2 keystore (public part)")
      ->required();
  recover_cmd->add_option("--index", recover.indices, "Also print Y^i (repeatable)");

  VerifyCmd verify;
  auto* verify_cmd = app.add_subcommand("verify", "Standard ECDSA verification");
  verify.message_flags.Register(verify_cmd);
  verify.cmd = verify_cmd;
  verify_cmd->add_option("--public-key", verify.public_key, "Compressed point hex")->required();
  verify_cmd->add_option("--signature", verify.signature, "r||s or DER, hex")->required();
  verify_cmd->add_option("--curve", verify.curve, "secp256k1 or prime256v1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*setup_cmd) return setup.Run();
    if (*keygen_cmd) return keygen.Run();
    if (*sign_cmd) return sign.Run();
    if (*derive_cmd) return derive.Run();
    if (*recover_cmd) return recover.Run();
    if (*verify_cmd) return verify.Run();
  } catch (const ProtocolAbort& e) {
    SessionOutcome outcome;
    outcome.code = e.code();
    outcome.detail = e.what();
    return ReportAbort(outcome);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace
}  // namespace trecdsa

int main(int argc, char** argv) { return trecdsa::Main(argc, argv); }
