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

#include "mpaxos/net/transport.hpp"

#include <spdlog/spdlog.h>

#include "mpaxos/codec.hpp"

namespace mpaxos::net {

namespace {
constexpr auto kAcceptPoll = std::chrono::milliseconds(50);
constexpr std::size_t kMaxIdlePerPeer = 16;
}  // namespace

void Server::start(const std::string& host, std::uint16_t port, Handler handler) {
  handler_ = std::move(handler);
  listener_ = listen_on(host, port);
  port_ = local_port(listener_);
  stopping_ = false;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::accept_loop() {
  while (!stopping_) {
    auto socket = accept_from(listener_, Clock::now() + kAcceptPoll);
    reap(false);
    if (!socket) continue;
    std::lock_guard lock(mu_);
    if (stopping_) break;
    auto conn = std::make_unique<Connection>();
    conn->socket = std::move(*socket);
    Connection* c = conn.get();
    c->thread = std::thread([this, c] {
      try {
        handler_(c->socket);
      } catch (const std::exception& e) {
        spdlog::warn("connection handler failed: {}", e.what());
      }
      c->done = true;
    });
    connections_.push_back(std::move(conn));
  }
}

void Server::reap(bool all) {
  std::list<std::unique_ptr<Connection>> finished;
  {
    std::lock_guard lock(mu_);
    for (auto it = connections_.begin(); it != connections_.end();) {
      if (all || (*it)->done) {
        finished.push_back(std::move(*it));
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& c : finished) {
    c->socket.shutdown();
    if (c->thread.joinable()) c->thread.join();
  }
}

void Server::stop() {
  if (!acceptor_.joinable()) return;
  stopping_ = true;
  acceptor_.join();
  listener_.close();
  {
    std::lock_guard lock(mu_);
    for (auto& c : connections_) c->socket.shutdown();
  }
  reap(true);
}

void PeerServer::start(const std::string& host, std::uint16_t port, Handler handler) {
  server_.start(host, port, [this, handler = std::move(handler)](Socket& socket) {
    // Idle waits are bounded so stop() is never held up.
    constexpr auto kIdle = std::chrono::milliseconds(200);
    constexpr auto kFrameTimeout = std::chrono::seconds(5);
    while (!server_.stopping()) {
      if (!wait_readable(socket, Clock::now() + kIdle)) {
        if (peer_closed(socket)) return;
        continue;
      }
      auto payload = read_frame(socket, Clock::now() + kFrameTimeout);
      if (!payload) return;
      Message response;
      try {
        const Message request = decode(*payload);
        if (!is_request(request)) return;
        response = handler(request);
      } catch (const CodecError& e) {
        spdlog::warn("dropping peer connection: {}", e.what());
        return;
      }
      if (!write_frame(socket, encode(response), Clock::now() + kFrameTimeout)) return;
    }
  });
}

PeerClient::PeerClient(std::vector<std::string> peers) : idle_(peers.size()) {
  for (const auto& p : peers) peers_.push_back(parse_host_port(p));
}

Socket PeerClient::lease(std::size_t peer, Clock::time_point deadline) {
  {
    std::lock_guard lock(mu_);
    auto& idle = idle_[peer];
    while (!idle.empty()) {
      Socket s = std::move(idle.back());
      idle.pop_back();
      if (!peer_closed(s)) return s;
    }
  }
  return connect_to(peers_[peer], deadline);
}

void PeerClient::give_back(std::size_t peer, Socket socket) {
  std::lock_guard lock(mu_);
  if (idle_[peer].size() < kMaxIdlePerPeer) idle_[peer].push_back(std::move(socket));
}

std::optional<Message> PeerClient::call(PeerId to, const Message& request, Duration timeout) {
  if (!to.valid() || static_cast<std::size_t>(to.value) >= peers_.size()) return std::nullopt;
  const auto peer = static_cast<std::size_t>(to.value);
  const auto deadline = Clock::now() + timeout;
  const std::string payload = encode(request);
  Socket socket;
  try {
    socket = lease(peer, deadline);
  } catch (const NetError& e) {
    spdlog::debug("peer {} unreachable: {}", to.value, e.what());
    return std::nullopt;
  }
  if (!write_frame(socket, payload, deadline)) return std::nullopt;
  auto reply = read_frame(socket, deadline);
  if (!reply) return std::nullopt;
  try {
    Message response = decode(*reply);
    give_back(peer, std::move(socket));
    return response;
  } catch (const CodecError& e) {
    spdlog::warn("bad reply from peer {}: {}", to.value, e.what());
    return std::nullopt;
  }
}

void PeerClient::close_all() {
  std::lock_guard lock(mu_);
  for (auto& idle : idle_) idle.clear();
}

}  // namespace mpaxos::net
