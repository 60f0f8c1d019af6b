#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "support.hpp"

// Drives the trecdsa binary end to end through a shell.

namespace trecdsa {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;
  std::map<std::string, std::string> fields;
};

CliResult RunCli(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string("TRECDSA_KEYSTORE_PASSPHRASE= ") + TRECDSA_CLI_PATH + " " + args;
  cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::istringstream lines(result.output);
  for (std::string line; std::getline(lines, line);) {
    const auto colon = line.find(": ");
    if (colon != std::string::npos) result.fields[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return result;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& file) const { return (path_ / file).string(); }

 private:
  fs::path path_;
};

const std::string kSizes = " --profile tiny --allow-insecure";

struct CliKeys {
  std::string p3, p1, p2, public_key;
};

CliKeys MakeKeys(const TempDir& dir, const std::string& seed, std::string* log = nullptr) {
  CliKeys k{dir / "p3.ks", dir / "p1.ks", dir / "p2.ks", ""};
  const std::string verbose = log != nullptr ? "-vv " : "";
  CliResult setup = RunCli(verbose + "setup --out " + k.p3 + " --seed " + seed, log != nullptr);
  REQUIRE(setup.exit_code == 0);
  CliResult keygen = RunCli(verbose + "keygen" + kSizes + " --recovery-key " + k.p3 +
                                " --keystore " + k.p1 + " --keystore " + k.p2 + " --seed " + seed,
                            log != nullptr);
  REQUIRE(keygen.exit_code == 0);
  k.public_key = keygen.fields["public_key"];
  REQUIRE(k.public_key.size() == 66);
  if (log != nullptr) *log = setup.output + keygen.output;
  return k;
}

std::string PartyArgs(const CliKeys& k, const std::string& pairing);

// Keystores made with the tiny profile need the opt-in again when signing.
std::string SignArgs(const CliKeys& k, const std::string& pairing) {
  return " --allow-insecure" + PartyArgs(k, pairing);
}

std::string PartyArgs(const CliKeys& k, const std::string& pairing) {
  if (pairing == "12") return " --keystore " + k.p1 + " --keystore " + k.p2;
  if (pairing == "13") return " --keystore " + k.p1 + " --p3-keystore " + k.p3;
  return " --keystore " + k.p2 + " --p3-keystore " + k.p3;
}

bool ExternallyValid(const std::string& pub, const std::string& message,
                     const std::string& compact) {
  const CurveConfig config{};
  const Point y = Point::FromBytes(config.curve(), FromHex(pub));
  const Signature sig = Signature::FromCompact(config.curve(), FromHex(compact));
  return testing::ExternalVerify(config, y, testing::AsMessage(message), sig);
}

TEST_SUITE("cli") {
  TEST_CASE("seeded setup and keygen are reproducible") {
    TempDir a("trecdsa_cli_a"), b("trecdsa_cli_b");
    const CliKeys ka = MakeKeys(a, "7");
    const CliKeys kb = MakeKeys(b, "7");
    CHECK(ka.public_key == kb.public_key);
    CHECK(ReadFileBytes(ka.p1) == ReadFileBytes(kb.p1));
    CHECK(ReadFileBytes(ka.p2) == ReadFileBytes(kb.p2));
    CHECK(ReadFileBytes(ka.p3) == ReadFileBytes(kb.p3));
  }

  TEST_CASE("sign with every pairing, verify inside and outside") {
    TempDir dir("trecdsa_cli_sign");
    const CliKeys k = MakeKeys(dir, "11");
    for (const std::string pairing : {"12", "13", "23"}) {
      CAPTURE(pairing);
      CliResult sign = RunCli("sign" + SignArgs(k, pairing) + " --pairing " + pairing +
                              " --message hello --seed 3");
      REQUIRE(sign.exit_code == 0);
      CHECK(sign.fields["public_key"] == k.public_key);
      CHECK(ExternallyValid(k.public_key, "hello", sign.fields["signature"]));
      CHECK(RunCli("verify --public-key " + k.public_key + " --signature " +
                   sign.fields["signature"] + " --message hello")
                .exit_code == 0);
      CHECK(RunCli("verify --public-key " + k.public_key + " --signature " + sign.fields["der"] +
                   " --message hello")
                .exit_code == 0);
      CHECK(RunCli("verify --public-key " + k.public_key + " --signature " +
                   sign.fields["signature"] + " --message hellO")
                .exit_code == 1);
      std::string flipped = sign.fields["signature"];
      flipped.back() = flipped.back() == '0' ? '1' : '0';
      CHECK(RunCli("verify --public-key " + k.public_key + " --signature " + flipped +
                   " --message hello")
                .exit_code == 1);
    }
  }

  TEST_CASE("derived keys agree between derive and sign") {
    TempDir dir("trecdsa_cli_derive");
    const CliKeys k = MakeKeys(dir, "12");
    CliResult derive = RunCli("derive --keystore " + k.p2 + " --index 7");
    REQUIRE(derive.exit_code == 0);
    const std::string y7 = derive.fields["public_key[7]"];
    REQUIRE(y7.size() == 66);
    CHECK(y7 != k.public_key);
    for (const std::string pairing : {"12", "13", "23"}) {
      CAPTURE(pairing);
      CliResult sign = RunCli("sign" + SignArgs(k, pairing) + " --pairing " + pairing +
                              " --derive-index 7 --message-hex 00ff --seed 4");
      REQUIRE(sign.exit_code == 0);
      CHECK(sign.fields["public_key"] == y7);
      CHECK(RunCli("verify --public-key " + y7 + " --signature " + sign.fields["signature"] +
                   " --message-hex 00ff")
                .exit_code == 0);
    }
  }

  TEST_CASE("verify accepts an externally produced DER signature") {
    CHECK(RunCli("verify --public-key "
                 "023566c2761af2b3a72f008922c7541a9086ee5bf8c45afa55caf0a3e89db05c16 "
                 "--message 'externally signed message' --signature "
                 "3046022100aced81f3690cff254b64d9d72613cf150a8af47c39147a14c31f630c9641e9b402"
                 "2100a7c19b02ad4eaa8252a6e99c0702aba16c16be697acce5fbee675fe05f273f7d")
              .exit_code == 0);
  }

  TEST_CASE("tampering aborts with a reason") {
    TempDir dir("trecdsa_cli_tamper");
    const CliKeys k = MakeKeys(dir, "13");
    CliResult sign = RunCli("sign" + SignArgs(k, "12") +
                                " --message hello --seed 5 --tamper "
                                "sender=P1,round=4,kind=sign_delta,action=flip,offset=0",
                            true);
    CHECK(sign.exit_code == 3);
    CHECK(sign.output.find("abort: ") != std::string::npos);
    CHECK(sign.output.find("protocol aborted: reason=") != std::string::npos);
    CHECK(sign.fields.count("signature") == 0);

    CliResult keygen = RunCli("keygen" + kSizes + " --recovery-key " + k.p3 + " --keystore " +
                                  (dir / "x1.ks") + " --keystore " + (dir / "x2.ks") +
                                  " --tamper sender=P2,round=2,kind=keygen_share,action=drop",
                              true);
    CHECK(keygen.exit_code == 3);
    CHECK(keygen.fields["abort"] == "timeout");
    CHECK_FALSE(fs::exists(dir / "x1.ks"));
  }

  TEST_CASE("recover rebuilds P3's share from public keystore data") {
    TempDir dir("trecdsa_cli_recover");
    const CliKeys k = MakeKeys(dir, "15");
    const KeyShareRecord p1 = LoadKeyShare(ReadFileBytes(k.p1), std::nullopt);
    const KeyShareRecord p2 = LoadKeyShare(ReadFileBytes(k.p2), std::nullopt);
    const std::string share_point =
        ToHex(Point::BaseMul(testing::ReconstructP3Share(p1, p2)).ToBytes());
    CliResult derive = RunCli("derive --keystore " + k.p1 + " --index 9");

    // The key-holder's file is sealed; P3 reads only its public section.
    Rng rng = Rng::FromSeed(std::uint64_t{16});
    SealOptions seal;
    seal.passphrase = "holder secret";
    seal.iterations = 1000;
    const std::string sealed = dir / "p2_sealed.ks";
    WriteFileBytes(sealed, SaveKeyShare(p2, seal, rng));
    for (const std::string& holder : {k.p1, sealed}) {
      CAPTURE(holder);
      CliResult rec = RunCli("recover --p3-keystore " + k.p3 + " --keystore " + holder +
                             " --index 9");
      REQUIRE(rec.exit_code == 0);
      CHECK(rec.fields["public_key"] == k.public_key);
      CHECK(rec.fields["share_point"] == share_point);
      CHECK(rec.fields["public_key[9]"] == derive.fields["public_key[9]"]);
      CHECK(rec.fields["recovery"] == "ok");
    }

    // A recovery key the shares were not made for is refused.
    CHECK(RunCli("setup --out " + (dir / "other.ks")).exit_code == 0);
    CHECK(RunCli("recover --p3-keystore " + (dir / "other.ks") + " --keystore " + k.p1)
              .exit_code != 0);
  }

  TEST_CASE("usage errors") {
    CHECK(RunCli("sign --message x").exit_code == 2);
    CHECK(RunCli("verify --public-key 00 --signature 00 --message x").exit_code == 2);
    CHECK(RunCli("keygen --keystore /nonexistent/dir/p1.ks --keystore /tmp/x --recovery-pubkey "
                 "02" + std::string(64, '1'))
              .exit_code == 2);
    TempDir dir("trecdsa_cli_usage");
    // Undersized moduli need an explicit opt-in.
    CHECK(RunCli("keygen --profile tiny --recovery-pubkey "
                 "023566c2761af2b3a72f008922c7541a9086ee5bf8c45afa55caf0a3e89db05c16 --keystore " +
                 (dir / "a") + " --keystore " + (dir / "b"))
              .exit_code == 2);
  }

  TEST_CASE("verbose logs carry no secrets") {
    TempDir dir("trecdsa_cli_secrets");
    std::string log;
    const CliKeys k = MakeKeys(dir, "14", &log);
    for (const std::string pairing : {"12", "13", "23"}) {
      log += RunCli("-vv sign" + SignArgs(k, pairing) + " --pairing " + pairing +
                        " --message m --seed 6",
                    true)
                 .output;
    }
    const KeyShareRecord p1 = LoadKeyShare(ReadFileBytes(k.p1), std::nullopt);
    const KeyShareRecord p2 = LoadKeyShare(ReadFileBytes(k.p2), std::nullopt);
    const RecoveryKeyPair p3 = LoadRecoveryKey(ReadFileBytes(k.p3), std::nullopt);
    std::vector<std::pair<std::string, std::string>> secrets = {
        {"x1", ToHex(p1.x.ToBytes())},
        {"x2", ToHex(p2.x.ToBytes())},
        {"omega1", ToHex(p1.omega.ToBytes())},
        {"omega2", ToHex(p2.omega.ToBytes())},
        {"x3", ToHex(testing::ReconstructP3Share(p1, p2).ToBytes())},
        {"u", ToHex(testing::ReconstructSecret(p1, p2).ToBytes())},
        {"d", ToHex(p1.derivation_secret)},
        {"sk3", ToHex(p3.secret.ToBytes())},
    };
    for (const KeyShareRecord* r : {&p1, &p2}) {
      secrets.emplace_back("paillier p", r->paillier.p().get_str(16));
      secrets.emplace_back("paillier q", r->paillier.q().get_str(16));
      secrets.emplace_back("lambda", r->paillier.lambda().get_str(16));
    }
    CHECK(log.size() > 100);
    for (const auto& [name, hex] : secrets) {
      CAPTURE(name);
      // A 16-hex-digit window is enough to rule out partial dumps.
      CHECK(log.find(hex.substr(0, 16)) == std::string::npos);
    }
  }
}

}  // namespace
}  // namespace trecdsa
