#pragma once

// Two-party sessions over TCP. Frames are a 4-byte big-endian length
// followed by an encoded Envelope; frames over 16 MiB are refused. The
// channel is neither encrypted nor authenticated: deployments must add TLS
// or an equivalent, since key generation sends a share point-to-point.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "trecdsa/protocol/message.hpp"
#include "trecdsa/random.hpp"
#include "trecdsa/transport/router.hpp"

namespace trecdsa {

constexpr std::size_t kMaxFrameBytes = 16u << 20;
constexpr std::chrono::milliseconds kDefaultRoundTimeout{30000};

class FramedChannel {
 public:
  explicit FramedChannel(int fd) : fd_(fd) {}
  FramedChannel(FramedChannel&& other) noexcept;
  FramedChannel& operator=(FramedChannel&& other) noexcept;
  FramedChannel(const FramedChannel&) = delete;
  FramedChannel& operator=(const FramedChannel&) = delete;
  ~FramedChannel();

  /// Throws ProtocolAbort(kConnectionLost) on failure.
  void Send(ByteView frame);
  /// Next frame. Throws ProtocolAbort with kTimeout, kConnectionLost or
  /// kMalformedMessage (oversized frame).
  Bytes Receive(std::chrono::milliseconds timeout);
  void Close();

 private:
  void ReadExact(std::uint8_t* out, std::size_t n, std::chrono::steady_clock::time_point deadline);

  int fd_ = -1;
};

/// Accepts a single connection on host:port.
FramedChannel ListenOnce(const std::string& host, std::uint16_t port,
                         std::chrono::milliseconds timeout);
/// Connects, retrying until the timeout expires.
FramedChannel ConnectTo(const std::string& host, std::uint16_t port,
                        std::chrono::milliseconds timeout);

/// "host:port" -> (host, port). Throws std::invalid_argument.
std::pair<std::string, std::uint16_t> ParseAddress(const std::string& address);

/// The listening side picks the session id and sends it as the first frame.
SessionId AgreeSessionId(FramedChannel& channel, bool listener, Rng& rng,
                         std::chrono::milliseconds timeout = kDefaultRoundTimeout);

/// Runs one party against a remote peer. After each round the party's
/// messages are followed by a round-end marker; the peer's messages up to
/// its marker form the next round's input.
SessionOutcome RunRemoteSession(Party& party, const SessionId& session, FramedChannel& channel,
                                std::chrono::milliseconds round_timeout = kDefaultRoundTimeout);

}  // namespace trecdsa
