#include "trecdsa/algebra.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/ecdsa.h>
#include <openssl/obj_mac.h>

#include <stdexcept>
#include <string>

#include "trecdsa/bigint.hpp"

namespace trecdsa {
namespace {

struct BnDeleter {
  void operator()(BIGNUM* b) const { BN_clear_free(b); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;

struct BnCtxDeleter {
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};

BN_CTX* ThreadCtx() {
  thread_local std::unique_ptr<BN_CTX, BnCtxDeleter> ctx(BN_CTX_new());
  if (!ctx) {
    throw std::runtime_error("BN_CTX_new failed");
  }
  return ctx.get();
}

BnPtr ToBn(const mpz_class& value) {
  const Bytes raw = EncodeMpz(value);
  BnPtr bn(BN_bin2bn(raw.data(), static_cast<int>(raw.size()), nullptr));
  if (!bn) {
    throw std::runtime_error("BN_bin2bn failed");
  }
  return bn;
}

mpz_class FromBn(const BIGNUM* bn) {
  Bytes raw(static_cast<std::size_t>(BN_num_bytes(bn)));
  BN_bn2bin(bn, raw.data());
  return DecodeMpz(raw);
}

void Check(int ok, const char* what) {
  if (ok != 1) {
    throw std::runtime_error(std::string("OpenSSL EC operation failed: ") + what);
  }
}

void CheckSameCurve(const Curve& a, const Curve& b) {
  if (&a != &b) {
    throw std::invalid_argument("operands belong to different curves");
  }
}

}  // namespace

void Curve::GroupDeleter::operator()(ec_group_st* g) const { EC_GROUP_free(g); }

Curve::Curve(CurveId id, int nid, std::string_view name)
    : id_(id), name_(name), group_(EC_GROUP_new_by_curve_name(nid)) {
  if (!group_) {
    throw std::runtime_error("curve not supported by OpenSSL: " + std::string(name));
  }
  order_ = FromBn(EC_GROUP_get0_order(group_.get()));
}

const Curve& Curve::Get(CurveId id) {
  static const Curve secp256k1(CurveId::kSecp256k1, NID_secp256k1, "secp256k1");
  static const Curve prime256v1(CurveId::kPrime256v1, NID_X9_62_prime256v1, "prime256v1");
  switch (id) {
    case CurveId::kSecp256k1:
      return secp256k1;
    case CurveId::kPrime256v1:
      return prime256v1;
  }
  throw std::invalid_argument("unknown curve id");
}

CurveId CurveIdFromName(std::string_view name) {
  if (name == "secp256k1") return CurveId::kSecp256k1;
  if (name == "prime256v1" || name == "p256") return CurveId::kPrime256v1;
  throw std::invalid_argument("unknown curve: " + std::string(name));
}

// ---- Scalar ----------------------------------------------------------------

Scalar::Scalar(const Curve& curve, const mpz_class& value)
    : curve_(&curve), value_(Mod(value, curve.order())) {}

Scalar Scalar::Random(const Curve& curve, Rng& rng) {
  return Scalar(curve, rng.Below(curve.order()));
}

Scalar Scalar::RandomNonZero(const Curve& curve, Rng& rng) {
  while (true) {
    Scalar s = Random(curve, rng);
    if (!s.IsZero()) return s;
  }
}

Scalar Scalar::FromBytes(const Curve& curve, ByteView bytes) {
  if (bytes.size() != kScalarBytes) {
    throw DecodeError("scalar encoding must be 32 bytes");
  }
  mpz_class v = DecodeMpz(bytes);
  if (v >= curve.order()) {
    throw DecodeError("scalar encoding is not reduced");
  }
  return Scalar(curve, v);
}

Scalar Scalar::Inverse() const {
  if (IsZero()) {
    throw std::domain_error("zero has no inverse mod q");
  }
  return Scalar(*curve_, InvertMod(value_, curve_->order()));
}

Bytes Scalar::ToBytes() const { return EncodeMpzFixed(value_, kScalarBytes); }

Scalar Scalar::operator+(const Scalar& o) const {
  CheckSameCurve(*curve_, *o.curve_);
  return Scalar(*curve_, value_ + o.value_);
}

Scalar Scalar::operator-(const Scalar& o) const {
  CheckSameCurve(*curve_, *o.curve_);
  return Scalar(*curve_, value_ - o.value_);
}

Scalar Scalar::operator*(const Scalar& o) const {
  CheckSameCurve(*curve_, *o.curve_);
  return Scalar(*curve_, value_ * o.value_);
}

Scalar Scalar::operator-() const { return Scalar(*curve_, -value_); }

bool Scalar::operator==(const Scalar& o) const {
  return curve_ == o.curve_ && value_ == o.value_;
}

// ---- Point -----------------------------------------------------------------

void Point::PointDeleter::operator()(ec_point_st* p) const { EC_POINT_free(p); }

Point::Point(const Curve& curve, ec_point_st* raw) : curve_(&curve), point_(raw) {
  if (!point_) {
    throw std::runtime_error("EC_POINT allocation failed");
  }
}

Point::Point(const Curve& curve) : Point(curve, EC_POINT_new(curve.group())) {
  Check(EC_POINT_set_to_infinity(curve.group(), point_.get()), "set_to_infinity");
}

Point::Point(const Point& other)
    : Point(*other.curve_, EC_POINT_dup(other.raw(), other.curve_->group())) {}

Point& Point::operator=(const Point& other) {
  if (this != &other) {
    Point copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Point Point::Generator(const Curve& curve) {
  return Point(curve, EC_POINT_dup(EC_GROUP_get0_generator(curve.group()), curve.group()));
}

Point Point::BaseMul(const Scalar& k) {
  const Curve& curve = k.curve();
  Point out(curve, EC_POINT_new(curve.group()));
  const BnPtr bn = ToBn(k.value());
  Check(EC_POINT_mul(curve.group(), out.point_.get(), bn.get(), nullptr, nullptr, ThreadCtx()),
        "base mul");
  return out;
}

Point Point::FromBytes(const Curve& curve, ByteView bytes) {
  if (bytes.size() == 1 && bytes[0] == 0x00) {
    return Point(curve);
  }
  if (bytes.size() != kPointBytes || (bytes[0] != 0x02 && bytes[0] != 0x03)) {
    throw DecodeError("point encoding must be 33-byte compressed SEC1");
  }
  Point out(curve, EC_POINT_new(curve.group()));
  if (EC_POINT_oct2point(curve.group(), out.point_.get(), bytes.data(), bytes.size(),
                         ThreadCtx()) != 1) {
    throw DecodeError("point is not on the curve");
  }
  return out;
}

bool Point::IsIdentity() const {
  return EC_POINT_is_at_infinity(curve_->group(), raw()) == 1;
}

mpz_class Point::X() const {
  if (IsIdentity()) {
    throw std::domain_error("identity has no affine coordinates");
  }
  BnPtr x(BN_new());
  Check(EC_POINT_get_affine_coordinates(curve_->group(), raw(), x.get(), nullptr, ThreadCtx()),
        "affine coordinates");
  return FromBn(x.get());
}

Bytes Point::ToBytes() const {
  if (IsIdentity()) {
    return Bytes{0x00};
  }
  Bytes out(kPointBytes);
  const std::size_t n = EC_POINT_point2oct(curve_->group(), raw(), POINT_CONVERSION_COMPRESSED,
                                           out.data(), out.size(), ThreadCtx());
  if (n != kPointBytes) {
    throw std::runtime_error("point serialization failed");
  }
  return out;
}

Point Point::operator+(const Point& o) const {
  CheckSameCurve(*curve_, *o.curve_);
  Point out(*curve_, EC_POINT_new(curve_->group()));
  Check(EC_POINT_add(curve_->group(), out.point_.get(), raw(), o.raw(), ThreadCtx()), "add");
  return out;
}

Point Point::operator-() const {
  Point out(*this);
  Check(EC_POINT_invert(curve_->group(), out.point_.get(), ThreadCtx()), "invert");
  return out;
}

Point Point::operator-(const Point& o) const { return *this + (-o); }

bool Point::operator==(const Point& o) const {
  if (curve_ != o.curve_) return false;
  const int cmp = EC_POINT_cmp(curve_->group(), raw(), o.raw(), ThreadCtx());
  if (cmp < 0) {
    throw std::runtime_error("EC_POINT_cmp failed");
  }
  return cmp == 0;
}

Point operator*(const Scalar& k, const Point& p) {
  CheckSameCurve(k.curve(), p.curve());
  const Curve& curve = p.curve();
  Point out(curve, EC_POINT_new(curve.group()));
  const BnPtr bn = ToBn(k.value());
  Check(EC_POINT_mul(curve.group(), out.point_.get(), nullptr, p.raw(), bn.get(), ThreadCtx()),
        "point mul");
  return out;
}

// ---- Signature -------------------------------------------------------------

Bytes Signature::ToCompact() const {
  Bytes out = r.ToBytes();
  AppendBytes(s.ToBytes(), &out);
  return out;
}

Signature Signature::FromCompact(const Curve& curve, ByteView bytes) {
  if (bytes.size() != 2 * kScalarBytes) {
    throw DecodeError("compact signature must be 64 bytes");
  }
  return Signature{Scalar::FromBytes(curve, bytes.first(kScalarBytes)),
                   Scalar::FromBytes(curve, bytes.subspan(kScalarBytes))};
}

Bytes Signature::ToDer() const {
  std::unique_ptr<ECDSA_SIG, decltype(&ECDSA_SIG_free)> sig(ECDSA_SIG_new(), ECDSA_SIG_free);
  BnPtr rb = ToBn(r.value());
  BnPtr sb = ToBn(s.value());
  if (!sig || ECDSA_SIG_set0(sig.get(), rb.get(), sb.get()) != 1) {
    throw std::runtime_error("ECDSA_SIG_set0 failed");
  }
  rb.release();
  sb.release();
  const int len = i2d_ECDSA_SIG(sig.get(), nullptr);
  if (len <= 0) {
    throw std::runtime_error("DER encoding failed");
  }
  Bytes out(static_cast<std::size_t>(len));
  unsigned char* p = out.data();
  i2d_ECDSA_SIG(sig.get(), &p);
  return out;
}

Signature Signature::FromDer(const Curve& curve, ByteView der) {
  const unsigned char* p = der.data();
  std::unique_ptr<ECDSA_SIG, decltype(&ECDSA_SIG_free)> sig(
      d2i_ECDSA_SIG(nullptr, &p, static_cast<long>(der.size())), ECDSA_SIG_free);
  if (!sig || p != der.data() + der.size()) {
    throw DecodeError("invalid DER signature");
  }
  const mpz_class rv = FromBn(ECDSA_SIG_get0_r(sig.get()));
  const mpz_class sv = FromBn(ECDSA_SIG_get0_s(sig.get()));
  if (rv >= curve.order() || sv >= curve.order()) {
    throw DecodeError("DER signature component out of range");
  }
  return Signature{Scalar(curve, rv), Scalar(curve, sv)};
}

Signature Signature::NormalizedLowS() const {
  const mpz_class half = s.curve().order() / 2;
  if (s.value() > half) {
    return Signature{r, -s};
  }
  return *this;
}

// ---- Hashing, interpolation, ECDSA -----------------------------------------

Scalar HashToScalar(const CurveConfig& config, ByteView data) {
  const Digest d = HashWith(config.hash_id, data);
  return Scalar(config.curve(), DecodeMpz(d));
}

Scalar LagrangeWeight(const Curve& curve, std::uint32_t which, std::uint32_t other) {
  if (which == other) {
    throw std::invalid_argument("Lagrange weight needs distinct evaluation points");
  }
  // L_which(0) = (0 - other) / (which - other)
  const Scalar num(curve, -static_cast<long>(other));
  const Scalar den(curve, static_cast<long>(which) - static_cast<long>(other));
  return num * den.Inverse();
}

Signature EcdsaSign(const CurveConfig& config, const Scalar& private_key, ByteView message,
                    const Scalar& nonce) {
  const Curve& curve = config.curve();
  if (private_key.IsZero() || nonce.IsZero()) {
    throw std::invalid_argument("private key and nonce must be in [1, q-1]");
  }
  const Scalar e = HashToScalar(config, message);
  const Point big_r = Point::BaseMul(nonce.Inverse());
  const Scalar r(curve, big_r.X());
  const Scalar s = nonce * (e + r * private_key);
  if (r.IsZero() || s.IsZero()) {
    throw DegenerateSignature("nonce produced r = 0 or s = 0");
  }
  return Signature{r, s};
}

bool EcdsaVerify(const CurveConfig& config, const Point& public_key, ByteView message,
                 const Signature& signature) {
  const Curve& curve = config.curve();
  if (&public_key.curve() != &curve || &signature.r.curve() != &curve ||
      &signature.s.curve() != &curve) {
    return false;
  }
  if (signature.r.IsZero() || signature.s.IsZero() || public_key.IsIdentity()) {
    return false;
  }
  const Scalar e = HashToScalar(config, message);
  const Scalar s_inv = signature.s.Inverse();
  const Point u = Point::BaseMul(e * s_inv) + (signature.r * s_inv) * public_key;
  if (u.IsIdentity()) {
    return false;
  }
  return Scalar(curve, u.X()) == signature.r;
}

}  // namespace trecdsa
