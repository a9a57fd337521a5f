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
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mpaxos/client_protocol.hpp"
#include "mpaxos/config.hpp"
#include "mpaxos/net/socket.hpp"
#include "mpaxos/node.hpp"

namespace mpaxos::testing {

// Asks the kernel for an unused port. Another process could grab it before
// we bind; acceptable on a test host.
inline std::uint16_t free_port() {
  auto s = net::listen_on("127.0.0.1", 0);
  return net::local_port(s);
}

// In-process replicas talking over real loopback sockets.
struct LocalCluster {
  explicit LocalCluster(int size, int commit_interval_ms = 300, int rpc_timeout_ms = 200) {
    std::vector<std::string> peers;
    for (int i = 0; i < size; ++i) peers.push_back("127.0.0.1:" + std::to_string(free_port()));
    for (int i = 0; i < size; ++i) {
      NodeConfig c;
      c.id = PeerId{i};
      c.peers = peers;
      c.client_port = free_port();
      c.commit_interval_ms = commit_interval_ms;
      c.rpc_timeout_ms = rpc_timeout_ms;
      c.seed = 100 + static_cast<std::uint64_t>(i);
      client_addrs.push_back("127.0.0.1:" + std::to_string(c.client_port));
      nodes.push_back(std::make_unique<Node>(c));
    }
  }

  void start() {
    for (auto& n : nodes) n->start();
  }

  std::optional<int> leader() {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i]->running() && nodes[i]->engine() && nodes[i]->engine()->is_leader())
        return static_cast<int>(i);
    return std::nullopt;
  }

  std::optional<int> wait_for_leader(std::chrono::milliseconds limit) {
    const auto until = std::chrono::steady_clock::now() + limit;
    while (std::chrono::steady_clock::now() < until) {
      if (auto l = leader()) return l;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    return std::nullopt;
  }

  std::vector<std::unique_ptr<Node>> nodes;
  std::vector<std::string> client_addrs;
};

// One request on a fresh connection.
inline std::optional<ClientResponse> client_call(const std::string& addr, const ClientRequest& request,
                                                 std::chrono::milliseconds timeout) {
  const auto deadline = net::Clock::now() + timeout;
  try {
    auto socket = net::connect_to(parse_host_port(addr), deadline);
    if (!net::write_frame(socket, encode_client_request(request), deadline)) return std::nullopt;
    auto reply = net::read_frame(socket, deadline);
    if (!reply) return std::nullopt;
    return decode_client_response(*reply);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace mpaxos::testing
