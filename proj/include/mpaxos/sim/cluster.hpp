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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mpaxos/config.hpp"
#include "mpaxos/kvstore.hpp"
#include "mpaxos/log.hpp"
#include "mpaxos/multipaxos.hpp"
#include "mpaxos/sim/scheduler.hpp"

namespace mpaxos::sim {

struct LinkModel {
  Duration latency = std::chrono::microseconds(1000);
  Duration jitter = std::chrono::microseconds(200);
};

struct ClientReply {
  enum class Kind { kOk, kRetry, kLeaderHint };
  Kind kind = Kind::kRetry;
  std::optional<std::string> value;
  std::optional<PeerId> leader;
};

struct ElectionRecord {
  Duration at;
  PeerId peer;
  Ballot candidate;
};

struct LeaderRecord {
  Duration at;
  PeerId peer;
  Ballot ballot;
};

struct CommitRoundRecord {
  PeerId leader;
  CommitRoundInfo info;
};

struct ExecutedEntry {
  LogIndex index = 0;
  Command command;
};

// An in-process cluster on virtual time. Links are directional and drop
// messages while down; a crashed node loses its engine but keeps its log and
// state machine, which model durable storage, and its last ballot.
class Cluster : private EngineObserver {
 public:
  Cluster(int num_peers, EngineConfig base, std::uint64_t seed, LinkModel links = {});
  ~Cluster() override;

  Cluster(const Cluster&) = delete;
  Cluster& operator=(const Cluster&) = delete;

  Scheduler& scheduler() { return scheduler_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  // Before start().
  void configure(PeerId peer, const EngineConfig& config);
  void set_initial_ballot(PeerId peer, Ballot ballot);
  void start();

  void set_link(PeerId from, PeerId to, bool up);
  bool link_up(PeerId from, PeerId to) const;
  void heal_all();

  void crash(PeerId peer);
  void restart(PeerId peer);
  bool alive(PeerId peer) const;
  bool halted(PeerId peer) const;

  MultiPaxos* engine(PeerId peer);
  Log& log(PeerId peer);
  KVStore& kv(PeerId peer);
  const EngineConfig& config(PeerId peer) const;

  // Runs |command| as if a client connected to |peer| sent it. |reply| is
  // called later from the scheduler, or never if the node crashes first.
  void submit(PeerId peer, Command command, std::function<void(ClientReply)> reply);

  // The live peer that considers itself leader under the highest ballot.
  std::optional<PeerId> leader() const;

  const std::vector<std::vector<ExecutedEntry>>& executed() const { return executed_; }
  const std::vector<std::string>& violations() const { return violations_; }
  void add_violation(std::string what);
  const std::vector<ElectionRecord>& elections() const { return elections_; }
  const std::vector<LeaderRecord>& leaders() const { return leaders_; }
  const std::vector<CommitRoundRecord>& commit_rounds() const { return commit_rounds_; }
  std::uint64_t trace_hash() const { return trace_hash_; }
  std::uint64_t messages_delivered() const { return delivered_; }

 private:
  class NodeEnv;
  struct Node;

  void build_engine(Node& node, Ballot ballot);
  void route(PeerId from, PeerId to, Message request, Duration deadline,
             Environment::ReplyHandler on_reply);
  Duration sample_latency();
  void trace(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);
  void drain(PeerId peer);

  void on_ballot_change(PeerId peer, Ballot from, Ballot to) override;
  void on_election(PeerId peer, Ballot candidate) override;
  void on_become_leader(PeerId peer, Ballot ballot) override;
  void on_commit_round(PeerId peer, const CommitRoundInfo& info) override;
  void on_log_progress(PeerId peer) override;

  Scheduler scheduler_;
  LinkModel links_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<std::vector<bool>> up_;
  bool started_ = false;

  std::vector<std::vector<ExecutedEntry>> executed_;
  std::vector<std::string> violations_;
  std::vector<ElectionRecord> elections_;
  std::vector<LeaderRecord> leaders_;
  std::vector<CommitRoundRecord> commit_rounds_;
  std::uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
  std::uint64_t delivered_ = 0;
};

}  // namespace mpaxos::sim
