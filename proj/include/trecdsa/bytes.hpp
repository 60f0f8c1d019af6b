#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trecdsa {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Thrown when an encoded value cannot be parsed. Protocol code maps it to
/// AbortCode::kMalformedMessage.
class DecodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string ToHex(ByteView data);
Bytes FromHex(std::string_view hex);

inline ByteView AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

void AppendU16Be(std::uint16_t value, Bytes* out);
void AppendU32Be(std::uint32_t value, Bytes* out);
void AppendBytes(ByteView data, Bytes* out);
std::uint16_t ReadU16Be(ByteView in, std::size_t* offset);
std::uint32_t ReadU32Be(ByteView in, std::size_t* offset);

// Fields are written and read in a fixed order; the reader rejects any tag it
// did not ask for, which keeps every encoding canonical.
//
//   field := tag:u16 ‖ length:u32 ‖ value[length]
class TlvWriter {
 public:
  TlvWriter& Put(std::uint16_t tag, ByteView value);
  TlvWriter& PutU32(std::uint16_t tag, std::uint32_t value);
  const Bytes& bytes() const { return out_; }
  Bytes Take() { return std::move(out_); }

 private:
  Bytes out_;
};

class TlvReader {
 public:
  explicit TlvReader(ByteView in, std::size_t max_field_len = kDefaultMaxField)
      : in_(in), max_field_len_(max_field_len) {}

  Bytes Get(std::uint16_t tag);
  std::uint32_t GetU32(std::uint16_t tag);
  bool AtEnd() const { return offset_ == in_.size(); }
  std::uint16_t PeekTag() const;
  void ExpectEnd() const;

  static constexpr std::size_t kDefaultMaxField = 1u << 22;

 private:
  ByteView in_;
  std::size_t offset_ = 0;
  std::size_t max_field_len_;
};

}  // namespace trecdsa
