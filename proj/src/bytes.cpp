#include "trecdsa/bytes.hpp"

#include <limits>

namespace trecdsa {

std::string ToHex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes FromHex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) {
    hex.remove_prefix(2);
  }
  if (hex.size() % 2 != 0) {
    throw DecodeError("hex string has odd length");
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = HexValue(hex[2 * i]);
    const int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw DecodeError("invalid hex digit");
    }
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

void AppendU16Be(std::uint16_t value, Bytes* out) {
  out->push_back(static_cast<std::uint8_t>(value >> 8));
  out->push_back(static_cast<std::uint8_t>(value & 0xFF));
}

void AppendU32Be(std::uint32_t value, Bytes* out) {
  out->push_back(static_cast<std::uint8_t>((value >> 24) & 0xFF));
  out->push_back(static_cast<std::uint8_t>((value >> 16) & 0xFF));
  out->push_back(static_cast<std::uint8_t>((value >> 8) & 0xFF));
  out->push_back(static_cast<std::uint8_t>(value & 0xFF));
}

void AppendBytes(ByteView data, Bytes* out) {
  out->insert(out->end(), data.begin(), data.end());
}

std::uint16_t ReadU16Be(ByteView in, std::size_t* offset) {
  if (*offset + 2 > in.size()) {
    throw DecodeError("not enough bytes to read u16");
  }
  const std::size_t i = *offset;
  *offset += 2;
  return static_cast<std::uint16_t>((in[i] << 8) | in[i + 1]);
}

std::uint32_t ReadU32Be(ByteView in, std::size_t* offset) {
  if (*offset + 4 > in.size()) {
    throw DecodeError("not enough bytes to read u32");
  }
  const std::size_t i = *offset;
  *offset += 4;
  return (static_cast<std::uint32_t>(in[i]) << 24) |
         (static_cast<std::uint32_t>(in[i + 1]) << 16) |
         (static_cast<std::uint32_t>(in[i + 2]) << 8) |
         static_cast<std::uint32_t>(in[i + 3]);
}

TlvWriter& TlvWriter::Put(std::uint16_t tag, ByteView value) {
  if (value.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("TLV field too long");
  }
  AppendU16Be(tag, &out_);
  AppendU32Be(static_cast<std::uint32_t>(value.size()), &out_);
  AppendBytes(value, &out_);
  return *this;
}

TlvWriter& TlvWriter::PutU32(std::uint16_t tag, std::uint32_t value) {
  Bytes b;
  AppendU32Be(value, &b);
  return Put(tag, b);
}

std::uint16_t TlvReader::PeekTag() const {
  std::size_t off = offset_;
  return ReadU16Be(in_, &off);
}

Bytes TlvReader::Get(std::uint16_t tag) {
  const std::uint16_t got = ReadU16Be(in_, &offset_);
  if (got != tag) {
    throw DecodeError("unexpected TLV tag " + std::to_string(got) + ", wanted " +
                      std::to_string(tag));
  }
  const std::uint32_t len = ReadU32Be(in_, &offset_);
  if (len > max_field_len_ || offset_ + len > in_.size()) {
    throw DecodeError("TLV field length out of range");
  }
  Bytes out(in_.begin() + static_cast<std::ptrdiff_t>(offset_),
            in_.begin() + static_cast<std::ptrdiff_t>(offset_ + len));
  offset_ += len;
  return out;
}

std::uint32_t TlvReader::GetU32(std::uint16_t tag) {
  const Bytes b = Get(tag);
  if (b.size() != 4) {
    throw DecodeError("u32 field must be 4 bytes");
  }
  std::size_t off = 0;
  return ReadU32Be(b, &off);
}

void TlvReader::ExpectEnd() const {
  if (!AtEnd()) {
    throw DecodeError("trailing bytes after TLV record");
  }
}

}  // namespace trecdsa
