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

#include <atomic>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mpaxos/config.hpp"
#include "mpaxos/core.hpp"
#include "mpaxos/net/socket.hpp"

namespace mpaxos::net {

// Accepts TCP connections and runs |handler| for each on its own thread.
// The handler should return when reads fail; stop() shuts every connection
// down so blocked reads fail promptly.
class Server {
 public:
  using Handler = std::function<void(Socket&)>;

  Server() = default;
  ~Server() { stop(); }
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds synchronously (throws NetError), then serves in the background.
  void start(const std::string& host, std::uint16_t port, Handler handler);
  void stop();
  std::uint16_t port() const { return port_; }
  bool stopping() const { return stopping_; }

 private:
  struct Connection {
    Socket socket;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void reap(bool all);

  Handler handler_;
  Socket listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::list<std::unique_ptr<Connection>> connections_;
};

// Serves the inter-peer protocol: one framed request, one framed response.
class PeerServer {
 public:
  using Handler = std::function<Message(const Message&)>;

  void start(const std::string& host, std::uint16_t port, Handler handler);
  void stop() { server_.stop(); }
  std::uint16_t port() const { return server_.port(); }

 private:
  Server server_;
};

// Blocking request/response calls to peers. Idle connections are kept per
// peer and reused; a connection carries one call at a time.
class PeerClient {
 public:
  explicit PeerClient(std::vector<std::string> peers);

  // nullopt on connect failure, timeout, or an undecodable reply.
  std::optional<Message> call(PeerId to, const Message& request, Duration timeout);
  // Drops idle connections; calls in progress finish normally.
  void close_all();

 private:
  Socket lease(std::size_t peer, Clock::time_point deadline);
  void give_back(std::size_t peer, Socket socket);

  std::vector<HostPort> peers_;
  std::mutex mu_;
  std::vector<std::vector<Socket>> idle_;
};

}  // namespace mpaxos::net
