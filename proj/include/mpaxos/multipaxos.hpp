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
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <vector>

#include "mpaxos/config.hpp"
#include "mpaxos/core.hpp"
#include "mpaxos/environment.hpp"
#include "mpaxos/log.hpp"

namespace mpaxos {

struct CommitRoundInfo {
  Duration at{};
  Ballot ballot;
  int num_oks = 0;
  int num_peers = 0;
  LogIndex gle_before = 0;
  LogIndex gle_after = 0;
  // Minimum last_executed over the leader and every ok reply.
  LogIndex min_last_executed = 0;
};

// Hooks for metrics and the simulator. Callbacks may run while the engine
// holds its lock and must not call back into the engine.
class EngineObserver {
 public:
  virtual ~EngineObserver() = default;
  virtual void on_ballot_change(PeerId, Ballot /*from*/, Ballot /*to*/) {}
  virtual void on_election(PeerId, Ballot /*candidate*/) {}
  virtual void on_become_leader(PeerId, Ballot) {}
  virtual void on_commit_round(PeerId, const CommitRoundInfo&) {}
  // The log may have become executable.
  virtual void on_log_progress(PeerId) {}
};

// Merge rule for recovery: per slot, the higher ballot wins, except that a
// decided (committed or executed) slot is never displaced.
void merge_instance(Slots& merged, const Instance& incoming, const SafetyHandler& on_violation);

// The MultiPaxos engine. Event driven: the prepare and commit loops are timer
// chains on the Environment, and every phase fans out asynchronously and
// finishes from reply callbacks. Thread-safe when the Environment runs
// callbacks on several threads.
class MultiPaxos : public std::enable_shared_from_this<MultiPaxos> {
 public:
  using Done = std::function<void(ReplicateOutcome)>;

  static std::shared_ptr<MultiPaxos> create(EngineConfig config, Log& log, Environment& env,
                                            EngineObserver* observer = nullptr,
                                            Ballot initial_ballot = kInitialBallot);

  MultiPaxos(const MultiPaxos&) = delete;
  MultiPaxos& operator=(const MultiPaxos&) = delete;

  void start();
  void stop();

  // Entry point for client commands. |done| runs once the command is
  // committed (ok) or the attempt failed.
  void replicate(Command command, ClientId client_id, Done done);

  // Handles a peer request and returns the response.
  Message handle(const Message& request);
  PrepareResponse on_prepare(const PrepareRequest& request);
  AcceptResponse on_accept(const AcceptRequest& request);
  CommitResponse on_commit(const CommitRequest& request);

  PeerId id() const { return config_.id; }
  Ballot ballot() const;
  bool is_leader() const;
  Duration effective_commit_interval() const;
  Duration election_interval_upper_bound() const;
  std::int64_t elections_initiated() const;
  LogIndex leader_global_last_executed() const;

  // Exposed for unit tests; production code drives these from the loops.
  void become_leader(Ballot new_ballot, LogIndex new_last_index);
  void become_follower(Ballot new_ballot);
  bool received_commit() { return commit_received_.exchange(false); }

 private:
  struct PrepareAggregate;
  struct AcceptAggregate;
  struct CommitAggregate;
  struct FollowerTrack {
    LogIndex last_executed = -1;
    int stalled_rounds = 0;
    // Set after a resend; keeps resending each round until caught up.
    bool repairing = false;
  };

  MultiPaxos(EngineConfig config, Log& log, Environment& env, EngineObserver* observer,
             Ballot initial_ballot);

  // All *_locked members require mu_.
  void set_ballot_locked(Ballot b);
  void become_leader_locked(Ballot new_ballot, LogIndex new_last_index);
  void become_follower_locked(Ballot new_ballot);
  void wake_prepare_locked();
  void arm_prepare_locked(Duration delay);
  Duration election_sleep_locked();
  void record_election_locked(Duration now);
  void maybe_reset_interval_locked(Duration now);
  std::vector<Instance> collect_repairs_locked();

  void prepare_tick();
  void run_prepare_phase(Ballot candidate);
  void finish_prepare(Ballot candidate, bool success, Slots merged, LogIndex last_index);

  // |instance| must already be in our log and in pending_.
  void broadcast_accept(Instance instance, Done done);
  void finish_accept(LogIndex index, ReplicateOutcome outcome, const Done& done);
  void pump_replay();

  void commit_tick();
  void finish_commit(Ballot ballot, LogIndex gle_before, LogIndex leader_last_executed,
                     const CommitAggregate& state);

  std::weak_ptr<MultiPaxos> weak() { return weak_from_this(); }

  const EngineConfig config_;
  Log& log_;
  Environment& env_;
  EngineObserver* observer_;
  SafetyHandler on_violation_;

  mutable std::mutex mu_;
  Ballot ballot_;
  bool running_ = false;
  bool prepare_armed_ = false;
  bool preparing_ = false;
  bool commit_active_ = false;
  LogIndex gle_ = 0;

  Duration effective_ci_;
  std::deque<Duration> election_history_;
  Duration last_self_election_{};
  std::int64_t elections_ = 0;

  // Leader-side bookkeeping. |pending_| holds indices with an accept phase in
  // flight or queued for replay.
  std::set<LogIndex> pending_;
  std::deque<Instance> replay_queue_;
  int replay_inflight_ = 0;
  Ballot replay_ballot_;
  std::vector<FollowerTrack> followers_;

  std::atomic<bool> commit_received_{false};
};

}  // namespace mpaxos
