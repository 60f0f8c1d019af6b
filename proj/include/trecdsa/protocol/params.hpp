#pragma once

#include <cstddef>
#include <string_view>

#include "trecdsa/algebra.hpp"
#include "trecdsa/mta.hpp"

namespace trecdsa {

/// Sizes and switches shared by every party of a session.
struct ProtocolParams {
  CurveConfig curve;
  std::size_t paillier_bits = 2048;
  std::size_t aux_bits = 2048;
  MtaOptions mta;

  /// 2048-bit Paillier and auxiliary moduli.
  static ProtocolParams Production();
  /// 1024 / 1024. Insecure; for tests.
  static ProtocolParams Test();
  /// 1024 / 512. Insecure; for exhaustive sweeps.
  static ProtocolParams Tiny();
  /// "production", "test" or "tiny".
  static ProtocolParams FromProfileName(std::string_view name);

  bool IsInsecure() const { return paillier_bits < 2048 || aux_bits < 2048; }
};

}  // namespace trecdsa
