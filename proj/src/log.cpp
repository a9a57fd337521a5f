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

#include "mpaxos/log.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>

namespace mpaxos {

SafetyHandler abort_on_violation() {
  return [](const std::string& what) {
    spdlog::critical("safety violation: {}", what);
    std::abort();
  };
}

bool insert(Slots& slots, const Instance& instance, const SafetyHandler& on_violation) {
  auto [it, inserted] = slots.try_emplace(instance.index, instance);
  if (inserted) return true;

  Instance& current = it->second;
  if (current.state == InstanceState::kCommitted || current.state == InstanceState::kExecuted) {
    if (current.command != instance.command)
      on_violation("decided slot " + std::to_string(instance.index) +
                   " received a different command");
    return false;
  }
  if (instance.ballot > current.ballot) {
    current = instance;
    return false;
  }
  if (instance.ballot == current.ballot && current.command != instance.command)
    on_violation("slot " + std::to_string(instance.index) +
                 " holds two commands under ballot " + std::to_string(instance.ballot.value));
  return false;
}

Log::Log(KVStore& kv, SafetyHandler on_violation)
    : kv_(kv), on_violation_(std::move(on_violation)) {}

bool Log::is_running() const {
  std::lock_guard lock(mu_);
  return running_;
}

void Log::stop() {
  std::lock_guard lock(mu_);
  running_ = false;
  cv_executable_.notify_all();
  cv_committable_.notify_all();
}

LogIndex Log::last_executed() const {
  std::lock_guard lock(mu_);
  return last_executed_;
}

LogIndex Log::global_last_executed() const {
  std::lock_guard lock(mu_);
  return global_last_executed_;
}

LogIndex Log::last_index() const {
  std::lock_guard lock(mu_);
  return last_index_;
}

void Log::set_last_index(LogIndex index) {
  std::lock_guard lock(mu_);
  last_index_ = index;
}

LogIndex Log::advance_last_index() {
  std::lock_guard lock(mu_);
  return ++last_index_;
}

bool Log::is_executable() const {
  std::lock_guard lock(mu_);
  return executable_locked();
}

bool Log::executable_locked() const {
  auto it = slots_.find(last_executed_ + 1);
  return it != slots_.end() && it->second.state == InstanceState::kCommitted;
}

void Log::append(const Instance& instance) {
  std::lock_guard lock(mu_);
  if (instance.index <= global_last_executed_) return;
  if (insert(slots_, instance, on_violation_)) {
    last_index_ = std::max(last_index_, instance.index);
    cv_committable_.notify_all();
  }
}

void Log::commit(LogIndex index) {
  std::unique_lock lock(mu_);
  if (index <= global_last_executed_) return;

  auto it = slots_.find(index);
  while (running_ && it == slots_.end()) {
    if (cv_committable_.wait_for(lock, std::chrono::seconds(1)) == std::cv_status::timeout)
      spdlog::warn("commit({}) still waiting for the slot to be appended", index);
    it = slots_.find(index);
  }
  if (!running_) return;

  if (it->second.state == InstanceState::kInProgress) it->second.state = InstanceState::kCommitted;
  if (executable_locked()) cv_executable_.notify_one();
}

Executed Log::execute_locked() {
  Instance& instance = slots_.at(last_executed_ + 1);
  Executed out{instance.index, instance.client_id, instance.command, kv_.apply(instance.command)};
  instance.state = InstanceState::kExecuted;
  ++last_executed_;
  return out;
}

std::optional<Executed> Log::execute() {
  std::unique_lock lock(mu_);
  cv_executable_.wait(lock, [this] { return !running_ || executable_locked(); });
  if (!running_) return std::nullopt;
  return execute_locked();
}

std::optional<Executed> Log::try_execute() {
  std::lock_guard lock(mu_);
  if (!running_ || !executable_locked()) return std::nullopt;
  return execute_locked();
}

void Log::commit_until(LogIndex leader_last_executed, Ballot ballot) {
  std::lock_guard lock(mu_);
  for (LogIndex i = last_executed_ + 1; i <= leader_last_executed; ++i) {
    auto it = slots_.find(i);
    if (it == slots_.end()) break;
    Instance& instance = it->second;
    if (instance.ballot > ballot) {
      on_violation_("heartbeat ballot " + std::to_string(ballot.value) + " below slot " +
                    std::to_string(i) + " ballot " + std::to_string(instance.ballot.value));
      break;
    }
    // A lower ballot means a stale command from before a partition. It must
    // not commit; the next leader's replay overwrites it.
    if (instance.ballot < ballot) break;
    if (instance.state == InstanceState::kInProgress) instance.state = InstanceState::kCommitted;
  }
  if (executable_locked()) cv_executable_.notify_one();
}

void Log::trim_until(LogIndex leader_global_last_executed) {
  std::lock_guard lock(mu_);
  while (global_last_executed_ < leader_global_last_executed) {
    auto it = slots_.find(global_last_executed_ + 1);
    if (it == slots_.end() || it->second.state != InstanceState::kExecuted) {
      on_violation_("trim over unexecuted slot " + std::to_string(global_last_executed_ + 1));
      return;
    }
    slots_.erase(it);
    ++global_last_executed_;
  }
}

std::vector<Instance> Log::instances() const {
  std::lock_guard lock(mu_);
  std::vector<Instance> out;
  for (auto it = slots_.upper_bound(global_last_executed_);
       it != slots_.end() && it->first <= last_index_; ++it)
    out.push_back(it->second);
  return out;
}

std::optional<Instance> Log::at(LogIndex index) const {
  std::lock_guard lock(mu_);
  auto it = slots_.find(index);
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

std::size_t Log::size() const {
  std::lock_guard lock(mu_);
  return slots_.size();
}

std::optional<std::string> Log::validate() const {
  std::lock_guard lock(mu_);
  if (global_last_executed_ > last_executed_) return "i1: global_last_executed > last_executed";
  for (LogIndex i = global_last_executed_ + 1; i <= last_executed_; ++i) {
    auto it = slots_.find(i);
    if (it == slots_.end() || it->second.state != InstanceState::kExecuted)
      return "i2: slot " + std::to_string(i) + " not executed";
  }
  for (auto it = slots_.upper_bound(last_executed_); it != slots_.end(); ++it)
    if (it->second.state == InstanceState::kExecuted)
      return "i3: slot " + std::to_string(it->first) + " executed past last_executed";
  if (!slots_.empty() && slots_.begin()->first <= global_last_executed_)
    return "i4: slot " + std::to_string(slots_.begin()->first) + " not trimmed";
  if (!slots_.empty() && slots_.rbegin()->first > last_index_)
    return "slot " + std::to_string(slots_.rbegin()->first) + " beyond last_index";
  return std::nullopt;
}

}  // namespace mpaxos
