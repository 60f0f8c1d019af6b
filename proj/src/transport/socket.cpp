#include "trecdsa/transport/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <thread>

namespace trecdsa {
namespace {

using Clock = std::chrono::steady_clock;

int RemainingMs(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return left.count() <= 0 ? 0 : static_cast<int>(left.count());
}

addrinfo* Resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  if (getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &result) != 0) {
    throw std::runtime_error("cannot resolve " + host);
  }
  return result;
}

Envelope RoundEnd(const SessionId& session, PartyId sender, std::uint8_t round) {
  Envelope e;
  e.session_id = session;
  e.sender = sender;
  e.recipient = PartyId::kBroadcast;
  e.round = round;
  e.kind = MessageKind::kRoundEnd;
  return e;
}

}  // namespace

FramedChannel::FramedChannel(FramedChannel&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

FramedChannel& FramedChannel::operator=(FramedChannel&& other) noexcept {
  if (this != &other) {
    Close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

FramedChannel::~FramedChannel() { Close(); }

void FramedChannel::Close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void FramedChannel::Send(ByteView frame) {
  if (frame.size() > kMaxFrameBytes) throw std::invalid_argument("frame exceeds 16 MiB");
  Bytes buf;
  AppendU32Be(static_cast<std::uint32_t>(frame.size()), &buf);
  AppendBytes(frame, &buf);
  std::size_t sent = 0;
  while (sent < buf.size()) {
    const ssize_t n = ::send(fd_, buf.data() + sent, buf.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw ProtocolAbort(AbortCode::kConnectionLost, "send failed");
    sent += static_cast<std::size_t>(n);
  }
}

void FramedChannel::ReadExact(std::uint8_t* out, std::size_t n, Clock::time_point deadline) {
  std::size_t got = 0;
  while (got < n) {
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, RemainingMs(deadline));
    if (ready < 0 && errno == EINTR) continue;
    if (ready == 0) throw ProtocolAbort(AbortCode::kTimeout, "peer did not answer in time");
    if (ready < 0) throw ProtocolAbort(AbortCode::kConnectionLost, "poll failed");
    const ssize_t r = ::recv(fd_, out + got, n - got, 0);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) throw ProtocolAbort(AbortCode::kConnectionLost, "peer closed the connection");
    got += static_cast<std::size_t>(r);
  }
}

Bytes FramedChannel::Receive(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::uint8_t len_buf[4];
  ReadExact(len_buf, 4, deadline);
  std::size_t offset = 0;
  const std::uint32_t len = ReadU32Be(ByteView(len_buf, 4), &offset);
  if (len > kMaxFrameBytes) {
    throw ProtocolAbort(AbortCode::kMalformedMessage, "frame exceeds 16 MiB");
  }
  Bytes frame(len);
  ReadExact(frame.data(), len, deadline);
  return frame;
}

std::pair<std::string, std::uint16_t> ParseAddress(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("address must be host:port");
  const std::string port_str = address.substr(colon + 1);
  std::size_t used = 0;
  unsigned long port = 0;
  try {
    port = std::stoul(port_str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != port_str.size() || port == 0 || port > 65535) {
    throw std::invalid_argument("bad port in " + address);
  }
  return {address.substr(0, colon), static_cast<std::uint16_t>(port)};
}

FramedChannel ListenOnce(const std::string& host, std::uint16_t port,
                         std::chrono::milliseconds timeout) {
  addrinfo* info = Resolve(host, port, true);
  const int fd = ::socket(info->ai_family, info->ai_socktype, info->ai_protocol);
  if (fd < 0) {
    freeaddrinfo(info);
    throw std::runtime_error("socket() failed");
  }
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  const int bound = ::bind(fd, info->ai_addr, info->ai_addrlen);
  freeaddrinfo(info);
  if (bound != 0 || ::listen(fd, 1) != 0) {
    ::close(fd);
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port) + ": " +
                             std::strerror(errno));
  }
  pollfd pfd{fd, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (ready <= 0) {
    ::close(fd);
    throw ProtocolAbort(AbortCode::kTimeout, "no peer connected");
  }
  const int conn = ::accept(fd, nullptr, nullptr);
  ::close(fd);
  if (conn < 0) throw ProtocolAbort(AbortCode::kConnectionLost, "accept failed");
  ::setsockopt(conn, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return FramedChannel(conn);
}

FramedChannel ConnectTo(const std::string& host, std::uint16_t port,
                        std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  while (true) {
    addrinfo* info = Resolve(host, port, false);
    const int fd = ::socket(info->ai_family, info->ai_socktype, info->ai_protocol);
    const int rc = fd < 0 ? -1 : ::connect(fd, info->ai_addr, info->ai_addrlen);
    freeaddrinfo(info);
    if (rc == 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return FramedChannel(fd);
    }
    if (fd >= 0) ::close(fd);
    if (Clock::now() >= deadline) {
      throw ProtocolAbort(AbortCode::kConnectionLost, "cannot connect to " + host);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
}

SessionId AgreeSessionId(FramedChannel& channel, bool listener, Rng& rng,
                         std::chrono::milliseconds timeout) {
  SessionId id{};
  if (listener) {
    rng.Fill(id);
    channel.Send(id);
    return id;
  }
  const Bytes frame = channel.Receive(timeout);
  if (frame.size() != id.size()) {
    throw ProtocolAbort(AbortCode::kMalformedMessage, "bad session id frame");
  }
  std::copy(frame.begin(), frame.end(), id.begin());
  return id;
}

SessionOutcome RunRemoteSession(Party& party, const SessionId& session, FramedChannel& channel,
                                std::chrono::milliseconds round_timeout) {
  SessionOutcome outcome;
  std::vector<Envelope> inbound;
  const PartyId self = party.id();
  for (std::size_t round = 1; round <= party.round_count(); ++round) {
    const auto round_byte = static_cast<std::uint8_t>(round);
    try {
      std::vector<Envelope> out;
      try {
        out = party.Step(round, inbound);
      } catch (const ProtocolAbort& e) {
        // Best effort: tell the peer before giving up.
        try {
          channel.Send(MakeAbortEnvelope(session, self, round_byte, e.code()).Encode());
        } catch (const ProtocolAbort&) {
        }
        throw;
      }
      for (const Envelope& e : out) {
        outcome.transcript.push_back(e);
        channel.Send(e.Encode());
      }
      channel.Send(RoundEnd(session, self, round_byte).Encode());
      if (round == party.round_count()) break;

      inbound.clear();
      while (true) {
        const Bytes frame = channel.Receive(round_timeout);
        Envelope e = ParseOrAbort("frame", [&] { return Envelope::Decode(frame); });
        if (e.sender == self) {
          throw ProtocolAbort(AbortCode::kUnexpectedMessage, "peer used our party id");
        }
        if (e.kind == MessageKind::kRoundEnd) {
          if (e.round != round_byte) {
            throw ProtocolAbort(AbortCode::kUnexpectedMessage, "peer is in another round");
          }
          break;
        }
        const bool is_abort = e.kind == MessageKind::kAbort;
        inbound.push_back(std::move(e));
        if (is_abort) break;
      }
    } catch (const ProtocolAbort& e) {
      outcome.code = e.code();
      outcome.aborted_by = self;
      outcome.abort_round = round;
      outcome.detail = e.what();
      return outcome;
    }
  }
  outcome.success = true;
  return outcome;
}

}  // namespace trecdsa
