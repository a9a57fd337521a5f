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

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mpaxos/config.hpp"

namespace mpaxos::net {

class NetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

// Owning file descriptor for a TCP socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { close(); }
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release();
  void close();
  // Wakes any thread blocked on this socket without closing the descriptor.
  void shutdown();

 private:
  int fd_ = -1;
};

// Throws NetError. Port 0 picks an ephemeral port.
Socket listen_on(const std::string& host, std::uint16_t port);
std::uint16_t local_port(const Socket& socket);
Socket connect_to(const HostPort& address, Clock::time_point deadline);
// Waits for a connection; nullopt on timeout or when the listener is shut down.
std::optional<Socket> accept_from(Socket& listener, Clock::time_point deadline);

// True once the peer has closed the connection or it has failed. Does not
// consume data.
bool peer_closed(const Socket& socket);
// Waits until a read would not block (data or EOF).
bool wait_readable(const Socket& socket, Clock::time_point deadline);

// Length-prefixed frames. Both return false/nullopt on timeout, EOF, or error.
bool write_frame(Socket& socket, std::string_view payload, Clock::time_point deadline);
std::optional<std::string> read_frame(Socket& socket, Clock::time_point deadline);

}  // namespace mpaxos::net
