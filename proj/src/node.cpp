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

#include "mpaxos/node.hpp"

#include <spdlog/spdlog.h>

#include "mpaxos/codec.hpp"

namespace mpaxos {

namespace {
// A committed request normally executes within a few commit rounds; past
// this the client is told to retry.
constexpr auto kExecuteWait = std::chrono::seconds(10);
constexpr auto kIdle = std::chrono::milliseconds(200);
constexpr auto kFrameTimeout = std::chrono::seconds(5);
}  // namespace

class Node::Observer : public EngineObserver {
 public:
  void on_become_leader(PeerId peer, Ballot ballot) override {
    spdlog::info("peer {} became leader with ballot {}", peer.value, ballot.value);
  }
  void on_election(PeerId peer, Ballot candidate) override {
    spdlog::info("peer {} starting election with ballot {}", peer.value, candidate.value);
  }
  void on_ballot_change(PeerId peer, Ballot from, Ballot to) override {
    spdlog::debug("peer {} ballot {} -> {}", peer.value, from.value, to.value);
  }
};

Node::Node(NodeConfig config) : config_(std::move(config)), observer_(std::make_unique<Observer>()) {
  try {
    config_.validate();
  } catch (const ConfigError& e) {
    throw NodeError(e.what());
  }
}

Node::~Node() { stop(); }

void Node::start() {
  if (running_) return;
  stopping_ = false;
  served_ = 0;
  kv_ = std::make_unique<KVStore>();
  log_ = std::make_unique<Log>(*kv_);
  peer_client_ = std::make_unique<net::PeerClient>(config_.peers);
  env_ = std::make_unique<net::ThreadedEnvironment>(*peer_client_, config_.seed);
  engine_ = MultiPaxos::create(config_.engine(), *log_, *env_, observer_.get());

  if (executor_.joinable()) throw NodeError("executor already running");
  executor_ = std::thread([this] { executor_loop(); });
  running_ = true;
  engine_->start();

  const HostPort self = parse_host_port(config_.peers[static_cast<std::size_t>(config_.id.value)]);
  try {
    peer_server_.start(self.host, self.port, [this](const Message& m) { return engine_->handle(m); });
    client_server_.start(self.host, static_cast<std::uint16_t>(config_.client_port),
                         [this](net::Socket& s) { serve_session(s); });
  } catch (const net::NetError& e) {
    stop();
    throw NodeError("peer " + std::to_string(config_.id.value) + " failed to start: " + e.what());
  }
  spdlog::info("peer {} serving peers on {} and clients on port {}", config_.id.value,
               config_.peers[static_cast<std::size_t>(config_.id.value)], client_port());
}

void Node::stop() {
  if (!running_.exchange(false)) return;
  stopping_ = true;
  {
    std::lock_guard lock(parked_mu_);
    parked_cv_.notify_all();
  }
  client_server_.stop();
  peer_server_.stop();
  engine_->stop();
  // Stopping the log releases workers blocked in commit() and the executor.
  log_->stop();
  env_->stop();
  if (executor_.joinable()) executor_.join();
  peer_client_->close_all();
  {
    std::lock_guard lock(parked_mu_);
    parked_.clear();
  }
  engine_.reset();
  env_.reset();
  peer_client_.reset();
}

void Node::executor_loop() {
  while (auto e = log_->execute()) {
    // Results for clients of other nodes are dropped; their node executes
    // the same slot and answers its own client.
    if ((e->client_id & 0xff) != static_cast<ClientId>(config_.id.value)) continue;
    ClientResponse response;
    response.outcome = ClientOutcome::kOk;
    response.value = e->result.value;
    finish(e->client_id, std::move(response));
  }
}

void Node::finish(ClientId client_id, ClientResponse response) {
  std::lock_guard lock(parked_mu_);
  auto it = parked_.find(client_id);
  if (it == parked_.end() || it->second.done) return;
  it->second.done = true;
  it->second.response = std::move(response);
  parked_cv_.notify_all();
}

ClientResponse Node::serve(const ClientRequest& request) {
  const ClientId client_id = (next_client_++ << 8) | static_cast<ClientId>(config_.id.value);
  {
    std::lock_guard lock(parked_mu_);
    parked_.emplace(client_id, Waiter{});
  }
  engine_->replicate(request.command, client_id, [this, client_id](ReplicateOutcome outcome) {
    if (outcome.status == ReplicateStatus::kOk) return;  // the executor answers
    ClientResponse r;
    if (outcome.status == ReplicateStatus::kSomeoneElseLeader) {
      r.outcome = ClientOutcome::kLeaderHint;
      r.leader = outcome.leader;
    }
    finish(client_id, std::move(r));
  });

  std::unique_lock lock(parked_mu_);
  parked_cv_.wait_for(lock, kExecuteWait, [&] { return stopping_ || parked_[client_id].done; });
  ClientResponse response = parked_[client_id].done ? parked_[client_id].response : ClientResponse{};
  parked_.erase(client_id);
  response.request_id = request.request_id;
  return response;
}

void Node::serve_session(net::Socket& socket) {
  while (!stopping_) {
    if (!net::wait_readable(socket, net::Clock::now() + kIdle)) {
      if (net::peer_closed(socket)) return;
      continue;
    }
    auto payload = net::read_frame(socket, net::Clock::now() + kFrameTimeout);
    if (!payload) return;
    ClientRequest request;
    try {
      request = decode_client_request(*payload);
    } catch (const CodecError& e) {
      spdlog::warn("dropping client session: {}", e.what());
      return;
    }
    const ClientResponse response = serve(request);
    if (response.outcome == ClientOutcome::kOk) ++served_;
    if (!net::write_frame(socket, encode_client_response(response), net::Clock::now() + kFrameTimeout))
      return;
  }
}

}  // namespace mpaxos
