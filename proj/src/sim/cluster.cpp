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

#include "mpaxos/sim/cluster.hpp"

#include <spdlog/spdlog.h>

#include <stdexcept>

namespace mpaxos::sim {

// Binds the engine's timers and calls to one incarnation of one node, so that
// nothing scheduled before a crash fires afterwards.
class Cluster::NodeEnv : public Environment {
 public:
  NodeEnv(Cluster& cluster, PeerId id, std::uint64_t incarnation)
      : cluster_(cluster), id_(id), incarnation_(incarnation) {}

  Duration now() override { return cluster_.scheduler_.now(); }

  void schedule(Duration delay, Task task) override;

  void send(PeerId to, Message request, Duration deadline, ReplyHandler on_reply) override {
    cluster_.route(id_, to, std::move(request), deadline, std::move(on_reply));
  }

  double uniform(double lo, double hi) override { return cluster_.scheduler_.uniform(lo, hi); }

 private:
  Cluster& cluster_;
  PeerId id_;
  std::uint64_t incarnation_;
};

struct Cluster::Node {
  PeerId id;
  EngineConfig config;
  Ballot initial_ballot = kInitialBallot;
  KVStore kv;
  std::unique_ptr<Log> log;
  std::unique_ptr<NodeEnv> env;
  std::shared_ptr<MultiPaxos> engine;
  bool alive = true;
  bool halted = false;
  std::uint64_t incarnation = 0;
  ClientId next_client = 1;
  std::unordered_map<ClientId, std::function<void(ClientReply)>> parked;
};

void Cluster::NodeEnv::schedule(Duration delay, Task task) {
  cluster_.scheduler_.after(delay, [c = &cluster_, id = id_, inc = incarnation_,
                                    task = std::move(task)] {
    if (c->nodes_[static_cast<std::size_t>(id.value)]->incarnation == inc) task();
  });
}

Cluster::Cluster(int num_peers, EngineConfig base, std::uint64_t seed, LinkModel links)
    : scheduler_(seed), links_(links) {
  if (num_peers < 1 || num_peers >= kMaxNumPeers) throw std::invalid_argument("bad cluster size");
  base.num_peers = num_peers;
  up_.assign(static_cast<std::size_t>(num_peers),
             std::vector<bool>(static_cast<std::size_t>(num_peers), true));
  executed_.resize(static_cast<std::size_t>(num_peers));
  for (int i = 0; i < num_peers; ++i) {
    auto node = std::make_unique<Node>();
    node->id = PeerId{i};
    node->config = base;
    node->config.id = PeerId{i};
    const PeerId id = node->id;
    node->log = std::make_unique<Log>(node->kv, [this, id](const std::string& what) {
      add_violation("peer " + std::to_string(id.value) + ": " + what);
      // Halt the node outside the current call stack.
      scheduler_.after(Duration::zero(), [this, id] {
        nodes_[static_cast<std::size_t>(id.value)]->halted = true;
        crash(id);
      });
    });
    nodes_.push_back(std::move(node));
  }
}

Cluster::~Cluster() {
  for (auto& node : nodes_)
    if (node->engine) node->engine->stop();
}

void Cluster::configure(PeerId peer, const EngineConfig& config) {
  Node& node = *nodes_.at(static_cast<std::size_t>(peer.value));
  node.config = config;
  node.config.id = peer;
  node.config.num_peers = size();
}

void Cluster::set_initial_ballot(PeerId peer, Ballot ballot) {
  nodes_.at(static_cast<std::size_t>(peer.value))->initial_ballot = ballot;
}

void Cluster::build_engine(Node& node, Ballot ballot) {
  node.env = std::make_unique<NodeEnv>(*this, node.id, node.incarnation);
  node.engine = MultiPaxos::create(node.config, *node.log, *node.env, this, ballot);
}

void Cluster::start() {
  if (started_) return;
  started_ = true;
  for (auto& node : nodes_) {
    if (!node->alive) continue;
    build_engine(*node, node->initial_ballot);
    node->engine->start();
  }
}

void Cluster::set_link(PeerId from, PeerId to, bool up) {
  up_.at(static_cast<std::size_t>(from.value)).at(static_cast<std::size_t>(to.value)) = up;
}

bool Cluster::link_up(PeerId from, PeerId to) const {
  return up_[static_cast<std::size_t>(from.value)][static_cast<std::size_t>(to.value)];
}

void Cluster::heal_all() {
  for (auto& row : up_) row.assign(row.size(), true);
}

void Cluster::crash(PeerId peer) {
  Node& node = *nodes_.at(static_cast<std::size_t>(peer.value));
  if (!node.alive) return;
  node.alive = false;
  ++node.incarnation;
  if (node.engine) {
    node.initial_ballot = node.engine->ballot();
    node.engine->stop();
    node.engine.reset();
  }
  node.parked.clear();
}

void Cluster::restart(PeerId peer) {
  Node& node = *nodes_.at(static_cast<std::size_t>(peer.value));
  if (node.alive || node.halted) return;
  node.alive = true;
  ++node.incarnation;
  if (!started_) return;
  build_engine(node, node.initial_ballot);
  node.engine->start();
  drain(peer);
}

bool Cluster::alive(PeerId peer) const { return nodes_.at(static_cast<std::size_t>(peer.value))->alive; }

bool Cluster::halted(PeerId peer) const {
  return nodes_.at(static_cast<std::size_t>(peer.value))->halted;
}

MultiPaxos* Cluster::engine(PeerId peer) {
  return nodes_.at(static_cast<std::size_t>(peer.value))->engine.get();
}

Log& Cluster::log(PeerId peer) { return *nodes_.at(static_cast<std::size_t>(peer.value))->log; }

KVStore& Cluster::kv(PeerId peer) { return nodes_.at(static_cast<std::size_t>(peer.value))->kv; }

const EngineConfig& Cluster::config(PeerId peer) const {
  return nodes_.at(static_cast<std::size_t>(peer.value))->config;
}

std::optional<PeerId> Cluster::leader() const {
  std::optional<PeerId> best;
  Ballot best_ballot{-1};
  for (const auto& node : nodes_) {
    if (!node->alive || !node->engine || !node->engine->is_leader()) continue;
    Ballot b = node->engine->ballot();
    if (b > best_ballot) {
      best_ballot = b;
      best = node->id;
    }
  }
  return best;
}

void Cluster::add_violation(std::string what) {
  spdlog::debug("sim violation at {}us: {}", scheduler_.now().count(), what);
  violations_.push_back(std::move(what));
}

void Cluster::submit(PeerId peer, Command command, std::function<void(ClientReply)> reply) {
  Node& node = *nodes_.at(static_cast<std::size_t>(peer.value));
  if (!node.alive || !node.engine) return;
  const ClientId client_id = (node.next_client++ << 8) | static_cast<ClientId>(peer.value);
  const std::uint64_t inc = node.incarnation;
  node.parked.emplace(client_id, std::move(reply));
  node.engine->replicate(std::move(command), client_id,
                         [this, peer, client_id, inc](ReplicateOutcome outcome) {
                           Node& n = *nodes_[static_cast<std::size_t>(peer.value)];
                           if (n.incarnation != inc) return;
                           if (outcome.status == ReplicateStatus::kOk) return;  // wait for execution
                           auto it = n.parked.find(client_id);
                           if (it == n.parked.end()) return;
                           ClientReply r;
                           if (outcome.status == ReplicateStatus::kSomeoneElseLeader) {
                             r.kind = ClientReply::Kind::kLeaderHint;
                             r.leader = outcome.leader;
                           }
                           auto fn = std::move(it->second);
                           n.parked.erase(it);
                           scheduler_.after(Duration::zero(), [fn = std::move(fn), r] { fn(r); });
                         });
}

Duration Cluster::sample_latency() {
  if (links_.latency.count() == 0 && links_.jitter.count() == 0) return Duration::zero();
  double lo = static_cast<double>((links_.latency - links_.jitter).count());
  double hi = static_cast<double>((links_.latency + links_.jitter).count());
  return Duration(static_cast<Duration::rep>(scheduler_.uniform(std::max(lo, 0.0), hi)));
}

void Cluster::trace(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  for (std::uint64_t v : {static_cast<std::uint64_t>(scheduler_.now().count()), a, b, c, d}) {
    for (int i = 0; i < 8; ++i) {
      trace_hash_ ^= (v >> (8 * i)) & 0xff;
      trace_hash_ *= 0x100000001b3ULL;
    }
  }
}

namespace {

std::uint64_t message_digest(const Message& m) {
  std::uint64_t kind = m.index();
  std::uint64_t detail = 0;
  if (const auto* p = std::get_if<PrepareRequest>(&m)) detail = static_cast<std::uint64_t>(p->ballot.value);
  if (const auto* p = std::get_if<AcceptRequest>(&m))
    detail = static_cast<std::uint64_t>(p->instance.index) * 31 +
             static_cast<std::uint64_t>(p->instance.ballot.value);
  if (const auto* p = std::get_if<CommitRequest>(&m))
    detail = static_cast<std::uint64_t>(p->last_executed) * 31 +
             static_cast<std::uint64_t>(p->global_last_executed);
  if (const auto* p = std::get_if<PrepareResponse>(&m)) detail = p->instances.size();
  if (const auto* p = std::get_if<CommitResponse>(&m))
    detail = static_cast<std::uint64_t>(p->last_executed);
  if (const auto* p = std::get_if<AcceptResponse>(&m)) detail = static_cast<std::uint64_t>(p->type);
  return kind << 56 ^ detail;
}

}  // namespace

void Cluster::route(PeerId from, PeerId to, Message request, Duration deadline,
                    Environment::ReplyHandler on_reply) {
  const std::uint64_t inc = nodes_[static_cast<std::size_t>(from.value)]->incarnation;
  auto resolved = std::make_shared<bool>(false);
  auto handler = std::make_shared<Environment::ReplyHandler>(std::move(on_reply));

  auto same_incarnation = [this, from, inc] {
    const Node& n = *nodes_[static_cast<std::size_t>(from.value)];
    return n.alive && n.incarnation == inc;
  };

  scheduler_.after(deadline, [resolved, handler, same_incarnation] {
    if (*resolved) return;
    *resolved = true;
    if (same_incarnation()) (*handler)(std::nullopt);
  });

  if (!link_up(from, to)) return;
  scheduler_.after(sample_latency(), [this, from, to, request = std::move(request), resolved,
                                      handler, same_incarnation] {
    Node& target = *nodes_[static_cast<std::size_t>(to.value)];
    if (!link_up(from, to) || !target.alive || !target.engine) return;
    Message response;
    try {
      response = target.engine->handle(request);
    } catch (const std::exception& e) {
      add_violation(std::string("handler threw: ") + e.what());
      return;
    }
    ++delivered_;
    trace(static_cast<std::uint64_t>(from.value), static_cast<std::uint64_t>(to.value),
          message_digest(request), message_digest(response));
    scheduler_.after(sample_latency(), [this, from, to, response = std::move(response), resolved,
                                        handler, same_incarnation] {
      if (*resolved || !link_up(to, from) || !same_incarnation()) return;
      *resolved = true;
      trace(static_cast<std::uint64_t>(to.value), static_cast<std::uint64_t>(from.value),
            message_digest(response), 0);
      (*handler)(response);
    });
  });
}

void Cluster::drain(PeerId peer) {
  Node& node = *nodes_[static_cast<std::size_t>(peer.value)];
  auto& history = executed_[static_cast<std::size_t>(peer.value)];
  while (auto e = node.log->try_execute()) {
    if (e->index != static_cast<LogIndex>(history.size()) + 1)
      add_violation("peer " + std::to_string(peer.value) + " executed index " +
                    std::to_string(e->index) + " after " + std::to_string(history.size()));
    history.push_back(ExecutedEntry{e->index, e->command});
    if (e->client_id == 0 || (e->client_id & 0xff) != static_cast<ClientId>(peer.value)) continue;
    auto it = node.parked.find(e->client_id);
    if (it == node.parked.end()) continue;
    ClientReply r{ClientReply::Kind::kOk, e->result.value, std::nullopt};
    auto fn = std::move(it->second);
    node.parked.erase(it);
    scheduler_.after(Duration::zero(), [fn = std::move(fn), r] { fn(r); });
  }
}

void Cluster::on_ballot_change(PeerId peer, Ballot from, Ballot to) {
  if (to < from)
    add_violation("peer " + std::to_string(peer.value) + " ballot decreased " +
                  std::to_string(from.value) + " -> " + std::to_string(to.value));
}

void Cluster::on_election(PeerId peer, Ballot candidate) {
  elections_.push_back(ElectionRecord{scheduler_.now(), peer, candidate});
}

void Cluster::on_become_leader(PeerId peer, Ballot ballot) {
  for (const auto& r : leaders_)
    if (r.ballot == ballot && r.peer != peer)
      add_violation("two leaders for ballot " + std::to_string(ballot.value));
  leaders_.push_back(LeaderRecord{scheduler_.now(), peer, ballot});
}

void Cluster::on_commit_round(PeerId peer, const CommitRoundInfo& info) {
  commit_rounds_.push_back(CommitRoundRecord{peer, info});
}

void Cluster::on_log_progress(PeerId peer) {
  if (nodes_[static_cast<std::size_t>(peer.value)]->alive) drain(peer);
}

}  // namespace mpaxos::sim
