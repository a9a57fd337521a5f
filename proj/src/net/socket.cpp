// Copyright 2026 The mpaxos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpaxos/net/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "mpaxos/codec.hpp"

namespace mpaxos::net {

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  if (flags < 0 || ::fcntl(fd, F_SETFL, flags | O_NONBLOCK) < 0)
    throw NetError(errno_text("fcntl"));
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return left.count() < 0 ? 0 : static_cast<int>(left.count());
}

// Waits for |events| on |fd|. False on timeout, hangup, or error.
bool wait_for(int fd, short events, Clock::time_point deadline) {
  for (;;) {
    pollfd p{fd, events, 0};
    const int r = ::poll(&p, 1, remaining_ms(deadline));
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) return false;
    if (p.revents & events) return true;
    return false;
  }
}

addrinfo* resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &result);
  if (rc != 0) throw NetError("resolve " + host + ": " + ::gai_strerror(rc));
  return result;
}

}  // namespace

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.release();
  }
  return *this;
}

int Socket::release() {
  const int fd = fd_;
  fd_ = -1;
  return fd;
}

void Socket::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Socket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Socket listen_on(const std::string& host, std::uint16_t port) {
  addrinfo* info = resolve(host, port, true);
  Socket s(::socket(info->ai_family, info->ai_socktype, info->ai_protocol));
  if (!s.valid()) {
    ::freeaddrinfo(info);
    throw NetError(errno_text("socket"));
  }
  const int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const int rc = ::bind(s.fd(), info->ai_addr, info->ai_addrlen);
  ::freeaddrinfo(info);
  if (rc < 0) throw NetError(errno_text(("bind " + host + ":" + std::to_string(port)).c_str()));
  if (::listen(s.fd(), 128) < 0) throw NetError(errno_text("listen"));
  set_nonblocking(s.fd());
  return s;
}

std::uint16_t local_port(const Socket& socket) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(socket.fd(), reinterpret_cast<sockaddr*>(&addr), &len) < 0)
    throw NetError(errno_text("getsockname"));
  return ntohs(addr.sin_port);
}

Socket connect_to(const HostPort& address, Clock::time_point deadline) {
  addrinfo* info = resolve(address.host, address.port, false);
  Socket s(::socket(info->ai_family, info->ai_socktype, info->ai_protocol));
  if (!s.valid()) {
    ::freeaddrinfo(info);
    throw NetError(errno_text("socket"));
  }
  set_nonblocking(s.fd());
  const int rc = ::connect(s.fd(), info->ai_addr, info->ai_addrlen);
  ::freeaddrinfo(info);
  const std::string where = address.host + ":" + std::to_string(address.port);
  if (rc < 0 && errno != EINPROGRESS) throw NetError(errno_text(("connect " + where).c_str()));
  if (rc < 0) {
    if (!wait_for(s.fd(), POLLOUT, deadline)) throw NetError("connect " + where + ": timed out");
    int err = 0;
    socklen_t len = sizeof err;
    ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) throw NetError("connect " + where + ": " + std::strerror(err));
  }
  const int one = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return s;
}

std::optional<Socket> accept_from(Socket& listener, Clock::time_point deadline) {
  if (!wait_for(listener.fd(), POLLIN, deadline)) return std::nullopt;
  const int fd = ::accept(listener.fd(), nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  Socket s(fd);
  set_nonblocking(s.fd());
  const int one = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return s;
}

namespace {

bool write_all(Socket& socket, const char* data, std::size_t size, Clock::time_point deadline) {
  while (size > 0) {
    const ssize_t n = ::send(socket.fd(), data, size, MSG_NOSIGNAL);
    if (n > 0) {
      data += n;
      size -= static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      if (!wait_for(socket.fd(), POLLOUT, deadline)) return false;
      continue;
    }
    return false;
  }
  return true;
}

bool read_all(Socket& socket, char* data, std::size_t size, Clock::time_point deadline) {
  while (size > 0) {
    const ssize_t n = ::recv(socket.fd(), data, size, 0);
    if (n > 0) {
      data += n;
      size -= static_cast<std::size_t>(n);
      continue;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) {
      if (!wait_for(socket.fd(), POLLIN, deadline)) return false;
      continue;
    }
    return false;
  }
  return true;
}

}  // namespace

bool peer_closed(const Socket& socket) {
  char probe;
  const ssize_t n = ::recv(socket.fd(), &probe, 1, MSG_PEEK | MSG_DONTWAIT);
  return n == 0 || (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR);
}

bool wait_readable(const Socket& socket, Clock::time_point deadline) {
  return wait_for(socket.fd(), POLLIN, deadline);
}

bool write_frame(Socket& socket, std::string_view payload, Clock::time_point deadline) {
  if (payload.size() > kMaxFrameSize) return false;
  const std::string framed = frame(payload);
  return write_all(socket, framed.data(), framed.size(), deadline);
}

std::optional<std::string> read_frame(Socket& socket, Clock::time_point deadline) {
  char header[kFrameHeaderSize];
  if (!read_all(socket, header, sizeof header, deadline)) return std::nullopt;
  const std::uint32_t size = parse_frame_header(header);
  if (size > kMaxFrameSize) return std::nullopt;
  std::string payload(size, '\0');
  if (!read_all(socket, payload.data(), size, deadline)) return std::nullopt;
  return payload;
}

}  // namespace mpaxos::net
