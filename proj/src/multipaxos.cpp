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

#include "mpaxos/multipaxos.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpaxos {

namespace {

bool decided(const Instance& instance) {
  return instance.state == InstanceState::kCommitted ||
         instance.state == InstanceState::kExecuted;
}

Duration scale(Duration d, double factor) {
  return Duration(static_cast<Duration::rep>(std::llround(static_cast<double>(d.count()) * factor)));
}

}  // namespace

void merge_instance(Slots& merged, const Instance& incoming, const SafetyHandler& on_violation) {
  auto [it, inserted] = merged.try_emplace(incoming.index, incoming);
  if (inserted) return;
  Instance& current = it->second;

  // Two peers can legitimately disagree on a slot when the lower-ballot copy
  // is a stale proposal; a decided value must match any copy at an equal or
  // higher ballot.
  auto check = [&](const Instance& decided_copy, const Instance& other) {
    if (other.ballot >= decided_copy.ballot && other.command != decided_copy.command)
      on_violation("recovery found conflicting commands at decided slot " +
                   std::to_string(incoming.index));
  };

  if (decided(current)) {
    if (decided(incoming)) {
      if (incoming.command != current.command)
        on_violation("two decided commands at slot " + std::to_string(incoming.index));
    } else {
      check(current, incoming);
    }
    return;
  }
  if (decided(incoming)) {
    check(incoming, current);
    current = incoming;
    return;
  }
  if (incoming.ballot > current.ballot) {
    current = incoming;
  } else if (incoming.ballot == current.ballot && incoming.command != current.command) {
    on_violation("slot " + std::to_string(incoming.index) + " has two commands under ballot " +
                 std::to_string(incoming.ballot.value));
  }
}

struct MultiPaxos::PrepareAggregate {
  std::mutex mu;
  int num_rpcs = 1;
  int num_oks = 1;
  PeerId leader;
  LogIndex last_index = 0;
  Slots merged;
  bool done = false;
};

struct MultiPaxos::AcceptAggregate {
  std::mutex mu;
  int num_rpcs = 1;
  int num_oks = 1;
  PeerId leader;
  bool done = false;
};

struct MultiPaxos::CommitAggregate {
  std::mutex mu;
  int num_rpcs = 1;
  int num_oks = 1;
  PeerId leader;
  LogIndex min_last_executed = 0;
  std::vector<std::optional<LogIndex>> reported;  // per peer, from ok or reject
  bool done = false;
};

std::shared_ptr<MultiPaxos> MultiPaxos::create(EngineConfig config, Log& log, Environment& env,
                                               EngineObserver* observer, Ballot initial_ballot) {
  config.validate();
  return std::shared_ptr<MultiPaxos>(new MultiPaxos(config, log, env, observer, initial_ballot));
}

MultiPaxos::MultiPaxos(EngineConfig config, Log& log, Environment& env, EngineObserver* observer,
                       Ballot initial_ballot)
    : config_(config),
      log_(log),
      env_(env),
      observer_(observer),
      on_violation_(log.safety_handler()),
      ballot_(initial_ballot),
      effective_ci_(config.commit_interval),
      followers_(static_cast<std::size_t>(config.num_peers)) {}

void MultiPaxos::start() {
  std::lock_guard lock(mu_);
  if (running_) return;
  running_ = true;
  commit_received_ = false;
  if (mpaxos::is_leader(ballot_, config_.id)) {
    // Restarted with a ballot naming us; resume heartbeats and let the other
    // peers decide whether we are still leader.
    gle_ = log_.global_last_executed();
    commit_active_ = true;
    env_.schedule(Duration::zero(), [w = weak()] {
      if (auto self = w.lock()) self->commit_tick();
    });
  } else {
    wake_prepare_locked();
  }
}

void MultiPaxos::stop() {
  std::lock_guard lock(mu_);
  running_ = false;
  commit_active_ = false;
  for (const auto& instance : replay_queue_) pending_.erase(instance.index);
  replay_queue_.clear();
}

Ballot MultiPaxos::ballot() const {
  std::lock_guard lock(mu_);
  return ballot_;
}

bool MultiPaxos::is_leader() const {
  std::lock_guard lock(mu_);
  return mpaxos::is_leader(ballot_, config_.id);
}

Duration MultiPaxos::effective_commit_interval() const {
  std::lock_guard lock(mu_);
  return effective_ci_;
}

Duration MultiPaxos::election_interval_upper_bound() const {
  std::lock_guard lock(mu_);
  return scale(effective_ci_, config_.election_multiplier_hi);
}

std::int64_t MultiPaxos::elections_initiated() const {
  std::lock_guard lock(mu_);
  return elections_;
}

LogIndex MultiPaxos::leader_global_last_executed() const {
  std::lock_guard lock(mu_);
  return gle_;
}

// ---------------------------------------------------------------------------
// Leadership transitions

void MultiPaxos::set_ballot_locked(Ballot b) {
  if (b < ballot_) {
    on_violation_("ballot would decrease from " + std::to_string(ballot_.value) + " to " +
                  std::to_string(b.value));
    return;
  }
  if (b == ballot_) return;
  Ballot old = ballot_;
  ballot_ = b;
  if (observer_) observer_->on_ballot_change(config_.id, old, b);
}

void MultiPaxos::become_leader(Ballot new_ballot, LogIndex new_last_index) {
  std::lock_guard lock(mu_);
  become_leader_locked(new_ballot, new_last_index);
}

void MultiPaxos::become_leader_locked(Ballot new_ballot, LogIndex new_last_index) {
  set_ballot_locked(new_ballot);
  // Never move last_index backwards: indices at or below it may already be
  // reserved by in-flight proposals.
  log_.set_last_index(std::max(new_last_index, log_.last_index()));
  gle_ = std::max(gle_, log_.global_last_executed());
  for (auto& f : followers_) f = FollowerTrack{};
  for (const auto& instance : replay_queue_) pending_.erase(instance.index);
  replay_queue_.clear();
  if (observer_) observer_->on_become_leader(config_.id, new_ballot);
  if (running_ && !commit_active_) {
    commit_active_ = true;
    env_.schedule(Duration::zero(), [w = weak()] {
      if (auto self = w.lock()) self->commit_tick();
    });
  }
}

void MultiPaxos::become_follower(Ballot new_ballot) {
  std::lock_guard lock(mu_);
  become_follower_locked(new_ballot);
}

void MultiPaxos::become_follower_locked(Ballot new_ballot) {
  if (new_ballot <= ballot_) return;
  PeerId old_leader = extract_leader_id(ballot_);
  PeerId new_leader = extract_leader_id(new_ballot);
  if (new_leader == config_.id && old_leader != config_.id) {
    // A ballot carrying our id that we never won (a peer promised one of our
    // failed candidates). Keep its round but name no leader.
    new_ballot = Ballot{(new_ballot.value & ~kIdBits) | kMaxNumPeers};
    new_leader = kNoLeader;
  }
  if (new_leader != config_.id || old_leader == kNoLeader) wake_prepare_locked();
  set_ballot_locked(new_ballot);
}

// ---------------------------------------------------------------------------
// Prepare loop and failure detector

Duration MultiPaxos::election_sleep_locked() {
  double factor = env_.uniform(config_.election_multiplier_lo, config_.election_multiplier_hi);
  return scale(effective_ci_, factor);
}

void MultiPaxos::wake_prepare_locked() {
  if (running_ && !prepare_armed_ && !preparing_) arm_prepare_locked(election_sleep_locked());
}

void MultiPaxos::arm_prepare_locked(Duration delay) {
  prepare_armed_ = true;
  env_.schedule(delay, [w = weak()] {
    if (auto self = w.lock()) self->prepare_tick();
  });
}

void MultiPaxos::record_election_locked(Duration now) {
  ++elections_;
  last_self_election_ = now;
  if (!config_.adaptive.enabled) return;
  const Duration window = scale(config_.commit_interval, config_.adaptive.window_multiplier);
  election_history_.push_back(now);
  while (!election_history_.empty() && election_history_.front() < now - window)
    election_history_.pop_front();
  if (static_cast<int>(election_history_.size()) >= config_.adaptive.k) {
    const Duration cap = scale(config_.commit_interval, config_.adaptive.cap_multiplier);
    effective_ci_ = std::min(effective_ci_ * 2, cap);
    election_history_.clear();
  }
}

void MultiPaxos::maybe_reset_interval_locked(Duration now) {
  if (!config_.adaptive.enabled || effective_ci_ == config_.commit_interval) return;
  const Duration quiet = scale(config_.commit_interval, config_.adaptive.quiet_multiplier);
  if (now - last_self_election_ >= quiet) {
    effective_ci_ = config_.commit_interval;
    election_history_.clear();
  }
}

void MultiPaxos::prepare_tick() {
  std::unique_lock lock(mu_);
  prepare_armed_ = false;
  if (!running_ || preparing_ || mpaxos::is_leader(ballot_, config_.id)) return;

  const Duration now = env_.now();
  if (received_commit()) {
    maybe_reset_interval_locked(now);
    arm_prepare_locked(election_sleep_locked());
    return;
  }
  record_election_locked(now);
  const Ballot candidate = next_ballot(ballot_, config_.id);
  preparing_ = true;
  if (observer_) observer_->on_election(config_.id, candidate);
  lock.unlock();
  run_prepare_phase(candidate);
}

void MultiPaxos::run_prepare_phase(Ballot candidate) {
  auto state = std::make_shared<PrepareAggregate>();
  state->leader = config_.id;
  if (config_.num_peers == 1) {
    finish_prepare(candidate, true, {}, 0);
    return;
  }

  // Our own vote is counted up front; our log joins the merge only once the
  // quorum is in (finish_prepare), under the engine lock.
  const Message request = PrepareRequest{candidate, config_.id};
  for (std::int64_t peer = 0; peer < config_.num_peers; ++peer) {
    if (peer == config_.id.value) continue;
    env_.send(PeerId{peer}, request, config_.rpc_timeout,
              [w = weak(), state, candidate](std::optional<Message> reply) {
                auto self = w.lock();
                if (!self) return;
                std::unique_lock slock(state->mu);
                if (state->done) return;
                ++state->num_rpcs;
                const auto* response = reply ? std::get_if<PrepareResponse>(&*reply) : nullptr;
                if (response && response->type == ResponseType::kOk) {
                  ++state->num_oks;
                  for (const auto& instance : response->instances) {
                    state->last_index = std::max(state->last_index, instance.index);
                    merge_instance(state->merged, instance, self->on_violation_);
                  }
                } else if (response) {
                  std::lock_guard lock(self->mu_);
                  if (response->ballot > self->ballot_) {
                    self->become_follower_locked(response->ballot);
                    state->leader = extract_leader_id(self->ballot_);
                  }
                }
                const int n = self->config_.num_peers;
                bool success = state->num_oks > n / 2;
                if (!success && state->leader == self->config_.id && state->num_rpcs != n) return;
                state->done = true;
                Slots merged = std::move(state->merged);
                LogIndex last_index = state->last_index;
                slock.unlock();
                self->finish_prepare(candidate, success, std::move(merged), last_index);
              });
  }
}

void MultiPaxos::finish_prepare(Ballot candidate, bool success, Slots merged,
                                LogIndex last_index) {
  std::unique_lock lock(mu_);
  preparing_ = false;
  if (!running_) return;
  // Someone moved faster: a higher ballot arrived while we were collecting.
  if (!success || !(candidate > ballot_)) {
    if (!mpaxos::is_leader(ballot_, config_.id)) arm_prepare_locked(election_sleep_locked());
    return;
  }

  for (const auto& instance : log_.instances()) merge_instance(merged, instance, on_violation_);
  last_index = std::max(last_index, log_.last_index());

  become_leader_locked(candidate, last_index);

  // Replay everything above the trim frontier under the new ballot. Slots no
  // quorum member knows about get a no-op so execution can pass them.
  const LogIndex first = log_.global_last_executed() + 1;
  for (LogIndex i = first; i <= last_index; ++i) {
    Instance instance;
    if (auto it = merged.find(i); it != merged.end()) {
      instance = it->second;
    } else {
      instance.command = Command::noop();
      instance.client_id = 0;
    }
    instance.ballot = candidate;
    instance.index = i;
    instance.state = InstanceState::kInProgress;
    log_.append(instance);
    pending_.insert(i);
    replay_queue_.push_back(std::move(instance));
  }
  replay_ballot_ = candidate;
  replay_inflight_ = 0;
  lock.unlock();
  pump_replay();
}

// ---------------------------------------------------------------------------
// Accept phase

void MultiPaxos::replicate(Command command, ClientId client_id, Done done) {
  std::unique_lock lock(mu_);
  if (!running_) {
    lock.unlock();
    done(ReplicateOutcome::retry());
    return;
  }
  if (mpaxos::is_leader(ballot_, config_.id)) {
    Instance instance{ballot_, log_.advance_last_index(), client_id, InstanceState::kInProgress,
                      std::move(command)};
    log_.append(instance);
    pending_.insert(instance.index);
    lock.unlock();
    broadcast_accept(std::move(instance), std::move(done));
    return;
  }
  ReplicateOutcome outcome = is_someone_else_leader(ballot_, config_.id)
                                 ? ReplicateOutcome::someone_else_leader(extract_leader_id(ballot_))
                                 : ReplicateOutcome::retry();
  lock.unlock();
  done(outcome);
}

void MultiPaxos::broadcast_accept(Instance instance, Done done) {
  const LogIndex index = instance.index;
  const Ballot ballot = instance.ballot;
  if (config_.num_peers == 1) {
    log_.commit(index);
    finish_accept(index, ReplicateOutcome::ok(), done);
    return;
  }

  auto state = std::make_shared<AcceptAggregate>();
  state->leader = config_.id;
  const Message request = AcceptRequest{std::move(instance), config_.id};
  for (std::int64_t peer = 0; peer < config_.num_peers; ++peer) {
    if (peer == config_.id.value) continue;
    env_.send(PeerId{peer}, request, config_.rpc_timeout,
              [w = weak(), state, index, ballot, done](std::optional<Message> reply) {
                auto self = w.lock();
                if (!self) return;
                std::unique_lock slock(state->mu);
                if (state->done) return;
                ++state->num_rpcs;
                const auto* response = reply ? std::get_if<AcceptResponse>(&*reply) : nullptr;
                if (response && response->type == ResponseType::kOk) {
                  ++state->num_oks;
                } else if (response) {
                  std::lock_guard lock(self->mu_);
                  if (response->ballot > self->ballot_) self->become_follower_locked(response->ballot);
                  if (self->ballot_ != ballot) state->leader = extract_leader_id(self->ballot_);
                }
                const int n = self->config_.num_peers;
                std::optional<ReplicateOutcome> outcome;
                if (state->num_oks > n / 2) {
                  outcome = ReplicateOutcome::ok();
                } else if (state->leader != self->config_.id) {
                  outcome = state->leader.valid()
                                ? ReplicateOutcome::someone_else_leader(state->leader)
                                : ReplicateOutcome::retry();
                } else if (state->num_rpcs == n) {
                  outcome = ReplicateOutcome::retry();
                }
                if (!outcome) return;
                state->done = true;
                slock.unlock();
                // A quorum accepted this ballot's value, so it is chosen even
                // if we have since lost leadership.
                if (outcome->status == ReplicateStatus::kOk) self->log_.commit(index);
                self->finish_accept(index, *outcome, done);
              });
  }
}

void MultiPaxos::finish_accept(LogIndex index, ReplicateOutcome outcome, const Done& done) {
  {
    std::lock_guard lock(mu_);
    pending_.erase(index);
  }
  if (outcome.status == ReplicateStatus::kOk && observer_) observer_->on_log_progress(config_.id);
  if (done) done(outcome);
}

void MultiPaxos::pump_replay() {
  std::vector<Instance> batch;
  {
    std::lock_guard lock(mu_);
    if (!running_ || ballot_ != replay_ballot_) {
      for (const auto& instance : replay_queue_) pending_.erase(instance.index);
      replay_queue_.clear();
      return;
    }
    while (replay_inflight_ < config_.replay_window && !replay_queue_.empty()) {
      batch.push_back(std::move(replay_queue_.front()));
      replay_queue_.pop_front();
      ++replay_inflight_;
    }
  }
  for (auto& instance : batch) {
    const Ballot ballot = instance.ballot;
    const LogIndex index = instance.index;
    // Already in pending_ and in our log; go straight to the broadcast unless
    // leadership moved on.
    bool still_leader;
    {
      std::lock_guard lock(mu_);
      still_leader = running_ && ballot_ == ballot;
    }
    auto on_done = [w = weak(), ballot](ReplicateOutcome) {
      auto self = w.lock();
      if (!self) return;
      {
        std::lock_guard lock(self->mu_);
        if (self->replay_ballot_ == ballot) --self->replay_inflight_;
      }
      self->pump_replay();
    };
    if (!still_leader) {
      finish_accept(index, ReplicateOutcome::retry(), on_done);
      continue;
    }
    broadcast_accept(std::move(instance), on_done);
  }
}

// ---------------------------------------------------------------------------
// Commit loop

void MultiPaxos::commit_tick() {
  std::unique_lock lock(mu_);
  if (!running_ || !mpaxos::is_leader(ballot_, config_.id)) {
    commit_active_ = false;
    return;
  }
  const Ballot ballot = ballot_;
  const LogIndex gle = gle_;
  log_.trim_until(gle);
  const LogIndex last_executed = log_.last_executed();
  std::vector<Instance> repairs = collect_repairs_locked();
  lock.unlock();

  for (auto& instance : repairs) broadcast_accept(std::move(instance), nullptr);

  auto state = std::make_shared<CommitAggregate>();
  state->leader = config_.id;
  state->min_last_executed = last_executed;
  state->reported.resize(static_cast<std::size_t>(config_.num_peers));
  if (config_.num_peers == 1) {
    finish_commit(ballot, gle, last_executed, *state);
    return;
  }

  const Message request = CommitRequest{ballot, last_executed, gle, config_.id};
  for (std::int64_t peer = 0; peer < config_.num_peers; ++peer) {
    if (peer == config_.id.value) continue;
    env_.send(PeerId{peer}, request, config_.rpc_timeout,
              [w = weak(), state, peer, ballot, gle, last_executed](std::optional<Message> reply) {
                auto self = w.lock();
                if (!self) return;
                std::unique_lock slock(state->mu);
                if (state->done) return;
                ++state->num_rpcs;
                const auto* response = reply ? std::get_if<CommitResponse>(&*reply) : nullptr;
                if (response) state->reported[static_cast<std::size_t>(peer)] = response->last_executed;
                if (response && response->type == ResponseType::kOk) {
                  ++state->num_oks;
                  state->min_last_executed =
                      std::min(state->min_last_executed, response->last_executed);
                } else if (response) {
                  std::lock_guard lock(self->mu_);
                  if (response->ballot > self->ballot_) {
                    self->become_follower_locked(response->ballot);
                    state->leader = extract_leader_id(self->ballot_);
                  }
                }
                if (state->leader == self->config_.id && state->num_rpcs != self->config_.num_peers)
                  return;
                state->done = true;
                slock.unlock();
                self->finish_commit(ballot, gle, last_executed, *state);
              });
  }
}

std::vector<Instance> MultiPaxos::collect_repairs_locked() {
  // Our own slots whose accept phase ended without a quorum. Left alone they
  // would block execution here and on every follower.
  std::vector<Instance> out;
  const LogIndex from = log_.last_executed() + 1;
  const LogIndex to = std::min(log_.last_index(), from + config_.gap_fill.batch_cap - 1);
  for (LogIndex i = from; i <= to; ++i) {
    if (pending_.count(i)) continue;
    auto instance = log_.at(i);
    if (!instance || instance->state != InstanceState::kInProgress) continue;
    instance->ballot = ballot_;
    log_.append(*instance);
    pending_.insert(i);
    out.push_back(std::move(*instance));
  }
  return out;
}

void MultiPaxos::finish_commit(Ballot ballot, LogIndex gle_before, LogIndex leader_last_executed,
                               const CommitAggregate& state) {
  std::unique_lock lock(mu_);
  const int n = config_.num_peers;
  LogIndex gle_after = gle_before;
  if (state.num_oks == n) gle_after = std::max(gle_before, state.min_last_executed);
  if (ballot_ == ballot) gle_ = std::max(gle_, gle_after);

  const Duration now = env_.now();
  if (observer_)
    observer_->on_commit_round(config_.id,
                               CommitRoundInfo{now, ballot, state.num_oks, n, gle_before, gle_after,
                                               state.min_last_executed});
  if (state.num_oks == n) maybe_reset_interval_locked(now);

  // Followers whose last_executed stays frozen behind ours are usually
  // missing a slot (dropped accept). Resend what they lack.
  std::vector<std::pair<PeerId, std::vector<Instance>>> resends;
  for (std::int64_t peer = 0; peer < n; ++peer) {
    if (peer == config_.id.value) continue;
    const auto& reported = state.reported[static_cast<std::size_t>(peer)];
    if (!reported) continue;
    FollowerTrack& track = followers_[static_cast<std::size_t>(peer)];
    if (*reported < leader_last_executed && *reported == track.last_executed)
      ++track.stalled_rounds;
    else
      track.stalled_rounds = 0;
    track.last_executed = *reported;
    if (*reported >= leader_last_executed) track.repairing = false;
    if (config_.gap_fill.mode != GapFillMode::kRetransmit || ballot_ != ballot ||
        (!track.repairing && track.stalled_rounds < config_.gap_fill.stall_rounds))
      continue;
    track.stalled_rounds = 0;
    track.repairing = true;
    std::vector<Instance> batch;
    const LogIndex to = std::min(leader_last_executed, *reported + config_.gap_fill.batch_cap);
    for (LogIndex i = *reported + 1; i <= to; ++i) {
      auto instance = log_.at(i);
      if (!instance) continue;
      instance->ballot = ballot;
      instance->state = InstanceState::kInProgress;
      batch.push_back(std::move(*instance));
    }
    if (!batch.empty()) resends.emplace_back(PeerId{peer}, std::move(batch));
  }

  const bool keep_going = running_ && mpaxos::is_leader(ballot_, config_.id);
  if (keep_going) {
    env_.schedule(effective_ci_, [w = weak()] {
      if (auto self = w.lock()) self->commit_tick();
    });
  } else {
    commit_active_ = false;
  }
  lock.unlock();

  for (auto& [peer, batch] : resends) {
    for (auto& instance : batch)
      env_.send(peer, AcceptRequest{std::move(instance), config_.id}, config_.rpc_timeout,
                [](std::optional<Message>) {});
  }
}

// ---------------------------------------------------------------------------
// Request handlers

Message MultiPaxos::handle(const Message& request) {
  if (const auto* m = std::get_if<PrepareRequest>(&request)) return on_prepare(*m);
  if (const auto* m = std::get_if<AcceptRequest>(&request)) return on_accept(*m);
  if (const auto* m = std::get_if<CommitRequest>(&request)) return on_commit(*m);
  throw std::invalid_argument("not a request: " + std::string(message_type_name(request)));
}

PrepareResponse MultiPaxos::on_prepare(const PrepareRequest& request) {
  std::lock_guard lock(mu_);
  if (request.ballot >= ballot_) {
    become_follower_locked(request.ballot);
    return PrepareResponse::ok(log_.instances());
  }
  return PrepareResponse::reject(ballot_);
}

AcceptResponse MultiPaxos::on_accept(const AcceptRequest& request) {
  std::unique_lock lock(mu_);
  if (request.instance.ballot >= ballot_ || config_.skip_accept_ballot_check) {
    log_.append(request.instance);
    become_follower_locked(request.instance.ballot);
    return AcceptResponse::ok();
  }
  return AcceptResponse::reject(ballot_);
}

CommitResponse MultiPaxos::on_commit(const CommitRequest& request) {
  std::unique_lock lock(mu_);
  if (request.ballot < ballot_) return CommitResponse::reject(ballot_, log_.last_executed());
  commit_received_ = true;
  log_.commit_until(request.last_executed, request.ballot);
  log_.trim_until(request.global_last_executed);
  become_follower_locked(request.ballot);
  lock.unlock();
  // Let an event-driven executor catch up before we report last_executed.
  if (observer_) observer_->on_log_progress(config_.id);
  return CommitResponse::ok(log_.last_executed());
}

}  // namespace mpaxos
