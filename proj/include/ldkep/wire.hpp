#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "ldkep/protocol.hpp"

namespace ldkep {

enum class FrameType : std::uint8_t { params_hash = 0x01, msg_a = 0x02, msg_b = 0x03, key_confirm = 0x04 };

struct FrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The peer's parameters or key confirmation disagree with ours.
struct ProtocolAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Frame {
  FrameType type;
  Bytes payload;
};

constexpr std::uint32_t kMaxFramePayload = 64u << 20;

/// 4-byte big-endian payload length, 1-byte type, payload.
inline Bytes encode_frame(FrameType type, std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxFramePayload) throw FrameError("frame payload too large");
  Bytes out;
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out.push_back(static_cast<std::uint8_t>(type));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

inline FrameType check_frame_type(std::uint8_t t) {
  if (t < 0x01 || t > 0x04) throw FrameError("unknown frame type " + std::to_string(t));
  return static_cast<FrameType>(t);
}

/// Decodes exactly one frame occupying all of `data`.
inline Frame decode_frame(std::span<const std::uint8_t> data) {
  if (data.size() < 5) throw FrameError("truncated frame header");
  const std::uint32_t len = (std::uint32_t{data[0]} << 24) | (std::uint32_t{data[1]} << 16) |
                            (std::uint32_t{data[2]} << 8) | std::uint32_t{data[3]};
  const FrameType type = check_frame_type(data[4]);
  if (data.size() - 5 < len) throw FrameError("truncated frame payload");
  if (data.size() - 5 > len) throw FrameError("trailing bytes after frame");
  return {type, Bytes(data.begin() + 5, data.end())};
}

using KeyConfirm = std::array<std::uint8_t, 8>;

inline KeyConfirm key_confirm(const Digest& key) {
  KeyConfirm c{};
  std::copy_n(key.begin(), c.size(), c.begin());
  return c;
}

// ---------------------------------------------------------------------------
// TCP

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept {
    if (this != &o) {
      close();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }

  void close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

  void send_all(std::span<const std::uint8_t> data) const {
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw std::runtime_error(std::string("send: ") + std::strerror(errno));
      off += static_cast<std::size_t>(n);
    }
  }

  /// Reads exactly n bytes; a peer close before that is a framing error.
  Bytes recv_exact(std::size_t n) const {
    Bytes out(n);
    std::size_t off = 0;
    while (off < n) {
      const ssize_t r = ::recv(fd_, out.data() + off, n - off, 0);
      if (r < 0 && errno == EINTR) continue;
      if (r < 0) throw std::runtime_error(std::string("recv: ") + std::strerror(errno));
      if (r == 0) throw FrameError("connection closed mid-frame");
      off += static_cast<std::size_t>(r);
    }
    return out;
  }

  void write_frame(FrameType type, std::span<const std::uint8_t> payload) const {
    send_all(encode_frame(type, payload));
  }

  Frame read_frame() const {
    const Bytes head = recv_exact(5);
    const std::uint32_t len = (std::uint32_t{head[0]} << 24) | (std::uint32_t{head[1]} << 16) |
                              (std::uint32_t{head[2]} << 8) | std::uint32_t{head[3]};
    const FrameType type = check_frame_type(head[4]);
    if (len > kMaxFramePayload) throw FrameError("frame payload too large");
    return {type, recv_exact(len)};
  }

  Frame expect_frame(FrameType type) const {
    Frame f = read_frame();
    if (f.type != type) throw FrameError("unexpected frame type " + std::to_string(int(f.type)));
    return f;
  }

 private:
  int fd_ = -1;
};

/// Splits "host:port"; the host part may be empty for the wildcard address.
inline std::pair<std::string, std::uint16_t> parse_host_port(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("address must be host:port");
  const std::string port = addr.substr(colon + 1);
  unsigned long v = 0;
  try {
    std::size_t used = 0;
    v = std::stoul(port, &used);
    if (used != port.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad port in " + addr);
  }
  if (v > 65535) throw std::invalid_argument("bad port in " + addr);
  return {addr.substr(0, colon), static_cast<std::uint16_t>(v)};
}

class Listener {
 public:
  /// Binds host:port (port 0 picks a free port) and listens.
  explicit Listener(const std::string& addr) {
    auto [host, port] = parse_host_port(addr);
    sock_ = Socket(::socket(AF_INET, SOCK_STREAM, 0));
    if (!sock_.valid()) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(port);
    if (host.empty() || host == "*") {
      sa.sin_addr.s_addr = htonl(INADDR_ANY);
    } else if (host == "localhost") {
      sa.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    } else if (::inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1) {
      throw std::invalid_argument("bad IPv4 listen address: " + host);
    }
    if (::bind(sock_.fd(), reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0)
      throw std::runtime_error(std::string("bind: ") + std::strerror(errno));
    if (::listen(sock_.fd(), 1) != 0) throw std::runtime_error(std::string("listen: ") + std::strerror(errno));
  }

  std::uint16_t port() const {
    sockaddr_in sa{};
    socklen_t len = sizeof sa;
    ::getsockname(sock_.fd(), reinterpret_cast<sockaddr*>(&sa), &len);
    return ntohs(sa.sin_port);
  }

  Socket accept() const {
    for (;;) {
      const int fd = ::accept(sock_.fd(), nullptr, nullptr);
      if (fd >= 0) return Socket(fd);
      if (errno != EINTR) throw std::runtime_error(std::string("accept: ") + std::strerror(errno));
    }
  }

 private:
  Socket sock_;
};

/// Connects to host:port, retrying refused connections for up to `attempts`
/// times 100 ms apart so a peer may start before its server.
inline Socket connect_to(const std::string& addr, int attempts = 50) {
  auto [host, port] = parse_host_port(addr);
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string h = host.empty() ? "127.0.0.1" : host;
  if (const int rc = ::getaddrinfo(h.c_str(), std::to_string(port).c_str(), &hints, &res); rc != 0)
    throw std::runtime_error(std::string("resolve: ") + ::gai_strerror(rc));
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, &::freeaddrinfo);
  for (int i = 0;; ++i) {
    Socket s(::socket(AF_INET, SOCK_STREAM, 0));
    if (!s.valid()) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
    if (::connect(s.fd(), res->ai_addr, res->ai_addrlen) == 0) return s;
    if (i + 1 >= attempts || (errno != ECONNREFUSED && errno != EINTR))
      throw std::runtime_error(std::string("connect: ") + std::strerror(errno));
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
}

// ---------------------------------------------------------------------------
// Peer session

enum class PeerRole { alice, bob };

template <class E>
struct PeerResult {
  PeerRole role;
  Digest key_bytes{};
  KeyConfirm own{}, peer{};
  MsgA<E> msg_a;
  MsgB<E> msg_b;
  std::size_t k = 0, l = 0;
  std::size_t retries = 0;
  bool confirmed() const { return own == peer; }
};

/// One party of a session over a connected socket. Sizes come from the
/// "shape" stream and secrets from the party's own stream of `seed`, as in
/// run_session; keygen is redrawn while the party's own message rejects.
/// Order: params-hash both ways, MsgA from alice, MsgB from bob, key-confirm
/// both ways. Throws ProtocolAbort on a params-hash mismatch.
template <ProtocolPlatform P>
PeerResult<typename P::Element> run_peer(const PublicParams<P>& params, const SessionShape& shape,
                                         std::uint64_t seed, PeerRole role, const Socket& sock) {
  using E = typename P::Element;
  const Digest hash = params.hash();
  sock.write_frame(FrameType::params_hash, hash);
  const Frame theirs = sock.expect_frame(FrameType::params_hash);
  if (!std::equal(theirs.payload.begin(), theirs.payload.end(), hash.begin(), hash.end()))
    throw ProtocolAbort("peer public parameters differ (params-hash mismatch)");

  const Rng root(seed);
  Rng shape_rng = root.derive("shape");
  const std::size_t k_a = draw_in(shape.k_a_min, shape.k_a_max, shape_rng);
  const std::size_t k_b = draw_in(shape.k_b_min, shape.k_b_max, shape_rng);
  const std::size_t l_a = draw_in(shape.l_a_min, shape.l_a_max, shape_rng);
  const std::size_t l_b = draw_in(shape.l_b_min, shape.l_b_max, shape_rng);

  PeerResult<E> res;
  res.role = role;
  E key;
  if (role == PeerRole::alice) {
    Rng rng = root.derive("alice");
    AliceSecret<E> sk;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kKeygenAttempts) throw OperationRejected("key generation retry budget exhausted");
      try {
        sk = alice_keygen(params, k_a, l_a, rng);
        res.msg_a = alice_message(params, sk);
        break;
      } catch (const OperationRejected&) {
        ++res.retries;
      }
    }
    res.k = k_a;
    res.l = l_a;
    sock.write_frame(FrameType::msg_a, encode_msg_a(params, res.msg_a));
    res.msg_b = decode_msg_b(params, sock.expect_frame(FrameType::msg_b).payload);
    key = alice_shared(params, sk, res.msg_b);
  } else {
    Rng rng = root.derive("bob");
    BobSecret<E> sk;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kKeygenAttempts) throw OperationRejected("key generation retry budget exhausted");
      try {
        sk = bob_keygen(params, k_b, l_b, rng);
        res.msg_b = bob_message(params, sk);
        break;
      } catch (const OperationRejected&) {
        ++res.retries;
      }
    }
    res.k = k_b;
    res.l = l_b;
    res.msg_a = decode_msg_a(params, sock.expect_frame(FrameType::msg_a).payload);
    sock.write_frame(FrameType::msg_b, encode_msg_b(params, res.msg_b));
    key = bob_shared(params, sk, res.msg_a);
  }
  res.key_bytes = derive_key_bytes(*params.platform, key);
  res.own = key_confirm(res.key_bytes);
  sock.write_frame(FrameType::key_confirm, res.own);
  const Frame kc = sock.expect_frame(FrameType::key_confirm);
  if (kc.payload.size() != res.peer.size()) throw FrameError("key-confirm payload must be 8 bytes");
  std::copy(kc.payload.begin(), kc.payload.end(), res.peer.begin());
  return res;
}

}  // namespace ldkep
