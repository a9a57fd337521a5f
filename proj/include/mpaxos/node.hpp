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
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "mpaxos/client_protocol.hpp"
#include "mpaxos/config.hpp"
#include "mpaxos/kvstore.hpp"
#include "mpaxos/log.hpp"
#include "mpaxos/multipaxos.hpp"
#include "mpaxos/net/threaded_environment.hpp"
#include "mpaxos/net/transport.hpp"

namespace mpaxos {

class NodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One replica: kvstore, log, engine, peer server, client server, executor.
// State lives in memory only; every start() begins from an empty log.
class Node {
 public:
  explicit Node(NodeConfig config);
  ~Node();
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  // Throws NodeError (e.g. a port is taken); nothing is left running then.
  void start();
  void stop();
  bool running() const { return running_; }

  const NodeConfig& config() const { return config_; }
  std::uint16_t client_port() const { return client_server_.port(); }
  std::uint16_t peer_port() const { return peer_server_.port(); }
  // Null while stopped.
  MultiPaxos* engine() { return engine_.get(); }

  // Client requests served end to end since start().
  std::uint64_t served() const { return served_; }

 private:
  struct Waiter {
    bool done = false;
    ClientResponse response;
  };
  class Observer;

  void executor_loop();
  void serve_session(net::Socket& socket);
  ClientResponse serve(const ClientRequest& request);
  void finish(ClientId client_id, ClientResponse response);

  NodeConfig config_;
  std::unique_ptr<Observer> observer_;
  std::unique_ptr<KVStore> kv_;
  std::unique_ptr<Log> log_;
  std::unique_ptr<net::PeerClient> peer_client_;
  std::unique_ptr<net::ThreadedEnvironment> env_;
  std::shared_ptr<MultiPaxos> engine_;
  net::PeerServer peer_server_;
  net::Server client_server_;
  std::thread executor_;

  std::atomic<bool> running_{false};
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> next_client_{1};
  std::atomic<std::uint64_t> served_{0};

  std::mutex parked_mu_;
  std::condition_variable parked_cv_;
  std::unordered_map<ClientId, Waiter> parked_;
};

}  // namespace mpaxos
