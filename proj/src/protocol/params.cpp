#include "trecdsa/protocol/params.hpp"

#include <stdexcept>
#include <string>

namespace trecdsa {

ProtocolParams ProtocolParams::Production() { return ProtocolParams{}; }

ProtocolParams ProtocolParams::Test() {
  ProtocolParams p;
  p.paillier_bits = 1024;
  p.aux_bits = 1024;
  return p;
}

ProtocolParams ProtocolParams::Tiny() {
  ProtocolParams p;
  p.paillier_bits = 1024;
  p.aux_bits = 512;
  return p;
}

ProtocolParams ProtocolParams::FromProfileName(std::string_view name) {
  if (name == "production") return Production();
  if (name == "test") return Test();
  if (name == "tiny") return Tiny();
  throw std::invalid_argument("unknown profile: " + std::string(name));
}

}  // namespace trecdsa
