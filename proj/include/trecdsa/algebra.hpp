#pragma once

// Curve group and scalar field arithmetic, plus a centralized ECDSA used as
// the reference for everything the threshold protocol signs.
//
// Nonce convention: signing takes k and publishes R = k^-1 * B with
// s = k(e + r d). Standard ECDSA writes the same signature with nonce
// k' = k^-1 (R = k' B, s = k'^-1 (e + r d)), so any standard verifier
// accepts the output unchanged.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "trecdsa/bytes.hpp"
#include "trecdsa/hash.hpp"
#include "trecdsa/random.hpp"

struct ec_group_st;
struct ec_point_st;

namespace trecdsa {

enum class CurveId : std::uint8_t {
  kSecp256k1 = 1,
  kPrime256v1 = 2,
};

constexpr std::size_t kScalarBytes = 32;
constexpr std::size_t kPointBytes = 33;

class Point;

/// Immutable curve description. Instances live for the whole program, so
/// Scalar and Point keep plain pointers to them.
class Curve {
 public:
  static const Curve& Get(CurveId id);
  static const Curve& Secp256k1() { return Get(CurveId::kSecp256k1); }

  CurveId id() const { return id_; }
  std::string_view name() const { return name_; }
  const mpz_class& order() const { return order_; }
  const ec_group_st* group() const { return group_.get(); }

  Curve(const Curve&) = delete;
  Curve& operator=(const Curve&) = delete;

 private:
  struct GroupDeleter {
    void operator()(ec_group_st* g) const;
  };

  Curve(CurveId id, int nid, std::string_view name);

  CurveId id_;
  std::string_view name_;
  std::unique_ptr<ec_group_st, GroupDeleter> group_;
  mpz_class order_;
};

CurveId CurveIdFromName(std::string_view name);

struct CurveConfig {
  CurveId curve_id = CurveId::kSecp256k1;
  HashId hash_id = HashId::kSha256;

  const Curve& curve() const { return Curve::Get(curve_id); }
  friend bool operator==(const CurveConfig&, const CurveConfig&) = default;
};

/// Element of Z_q for the curve order q.
class Scalar {
 public:
  /// Reduces `value` mod q (negative values are wrapped).
  Scalar(const Curve& curve, const mpz_class& value);
  Scalar(const Curve& curve, long value) : Scalar(curve, mpz_class(value)) {}

  static Scalar Zero(const Curve& curve) { return Scalar(curve, 0L); }
  static Scalar One(const Curve& curve) { return Scalar(curve, 1L); }
  static Scalar Random(const Curve& curve, Rng& rng);
  static Scalar RandomNonZero(const Curve& curve, Rng& rng);
  /// Strict 32-byte big-endian decoding; rejects values >= q.
  static Scalar FromBytes(const Curve& curve, ByteView bytes);

  const mpz_class& value() const { return value_; }
  const Curve& curve() const { return *curve_; }
  bool IsZero() const { return value_ == 0; }

  /// Throws std::domain_error for zero.
  Scalar Inverse() const;
  Bytes ToBytes() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  bool operator==(const Scalar& o) const;

 private:
  const Curve* curve_;
  mpz_class value_;
};

/// Curve point; the identity is a valid value.
class Point {
 public:
  explicit Point(const Curve& curve);  // identity
  Point(const Point& other);
  Point& operator=(const Point& other);
  Point(Point&&) noexcept = default;
  Point& operator=(Point&&) noexcept = default;
  ~Point() = default;

  static Point Identity(const Curve& curve) { return Point(curve); }
  static Point Generator(const Curve& curve);
  /// k * B for the curve generator B.
  static Point BaseMul(const Scalar& k);
  /// 33-byte compressed SEC1, or the single byte 0x00 for the identity.
  static Point FromBytes(const Curve& curve, ByteView bytes);

  const Curve& curve() const { return *curve_; }
  bool IsIdentity() const;
  /// Affine x-coordinate. Throws for the identity.
  mpz_class X() const;
  Bytes ToBytes() const;

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator-() const;
  Point& operator+=(const Point& o) { return *this = *this + o; }
  bool operator==(const Point& o) const;

  friend Point operator*(const Scalar& k, const Point& p);

 private:
  struct PointDeleter {
    void operator()(ec_point_st* p) const;
  };

  Point(const Curve& curve, ec_point_st* raw);
  const ec_point_st* raw() const { return point_.get(); }

  const Curve* curve_;
  std::unique_ptr<ec_point_st, PointDeleter> point_;
};

struct Signature {
  Scalar r;
  Scalar s;

  /// r ‖ s, 32 bytes each.
  Bytes ToCompact() const;
  static Signature FromCompact(const Curve& curve, ByteView bytes);
  Bytes ToDer() const;
  static Signature FromDer(const Curve& curve, ByteView der);
  /// Replaces s by q - s when s > q/2.
  Signature NormalizedLowS() const;
};

/// H(data) as a big-endian integer reduced mod q.
Scalar HashToScalar(const CurveConfig& config, ByteView data);

/// Lagrange coefficient at zero of `which` for the point pair {which, other}.
/// Throws std::invalid_argument for equal points.
Scalar LagrangeWeight(const Curve& curve, std::uint32_t which, std::uint32_t other);

/// Thrown by EcdsaSign when the supplied nonce yields r = 0 or s = 0.
class DegenerateSignature : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Signature EcdsaSign(const CurveConfig& config, const Scalar& private_key, ByteView message,
                    const Scalar& nonce);
bool EcdsaVerify(const CurveConfig& config, const Point& public_key, ByteView message,
                 const Signature& signature);

}  // namespace trecdsa
