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

#include <condition_variable>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mpaxos/core.hpp"
#include "mpaxos/kvstore.hpp"

namespace mpaxos {

// Invoked when the log observes a state that the protocol rules out (command
// mismatch on a decided slot, a heartbeat ballot below a slot's ballot, a trim
// over an unexecuted slot). The default handler logs and aborts. A handler
// that returns lets the log skip the offending mutation.
using SafetyHandler = std::function<void(const std::string& what)>;

SafetyHandler abort_on_violation();

using Slots = std::map<LogIndex, Instance>;

// Returns true iff |instance| landed in an empty slot.
bool insert(Slots& slots, const Instance& instance,
            const SafetyHandler& on_violation = abort_on_violation());

struct Executed {
  LogIndex index = 0;
  ClientId client_id = 0;
  Command command;
  CommandResult result;
};

// A sparse index->Instance map. Producers are the accept and commit handlers
// and the leader's replicate path; a single consumer drives execute().
class Log {
 public:
  explicit Log(KVStore& kv, SafetyHandler on_violation = abort_on_violation());

  Log(const Log&) = delete;
  Log& operator=(const Log&) = delete;

  bool is_running() const;
  void stop();

  LogIndex last_executed() const;
  LogIndex global_last_executed() const;
  LogIndex last_index() const;
  void set_last_index(LogIndex index);
  LogIndex advance_last_index();
  bool is_executable() const;

  void append(const Instance& instance);

  // Blocks until a slot exists at |index|, then marks it committed if it is
  // still in progress. Returns at once for already-trimmed indices and after
  // stop().
  void commit(LogIndex index);

  // Blocks until the next slot is committed or the log is stopped.
  std::optional<Executed> execute();
  // Non-blocking variant for callers that drive the log from an event loop.
  std::optional<Executed> try_execute();

  void commit_until(LogIndex leader_last_executed, Ballot ballot);
  void trim_until(LogIndex leader_global_last_executed);

  // Occupied slots in (global_last_executed, last_index], ascending.
  std::vector<Instance> instances() const;

  std::optional<Instance> at(LogIndex index) const;
  std::size_t size() const;

  const SafetyHandler& safety_handler() const { return on_violation_; }

  // Checks i1-i4 and the last_index bound; returns the first broken rule.
  std::optional<std::string> validate() const;

 private:
  bool executable_locked() const;
  Executed execute_locked();

  mutable std::mutex mu_;
  std::condition_variable cv_executable_;
  std::condition_variable cv_committable_;
  KVStore& kv_;
  SafetyHandler on_violation_;
  bool running_ = true;
  Slots slots_;
  LogIndex last_index_ = 0;
  LogIndex last_executed_ = 0;
  LogIndex global_last_executed_ = 0;
};

}  // namespace mpaxos
