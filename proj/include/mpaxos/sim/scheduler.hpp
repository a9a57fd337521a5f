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
#include <queue>
#include <random>
#include <vector>

#include "mpaxos/environment.hpp"

namespace mpaxos::sim {

// Virtual-time event loop. Events at the same instant run in the order they
// were scheduled; every random draw in a simulation comes from rng().
class Scheduler {
 public:
  using Task = std::function<void()>;

  explicit Scheduler(std::uint64_t seed) : rng_(seed) {}

  Duration now() const { return now_; }
  void at(Duration when, Task task);
  void after(Duration delay, Task task) { at(now_ + delay, std::move(task)); }

  // Runs the next event; false when the queue is empty.
  bool step();
  // Runs every event scheduled at or before |until|, then sets now to it.
  void run_until(Duration until);

  std::mt19937_64& rng() { return rng_; }
  double uniform(double lo, double hi);
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t executed() const { return executed_; }

 private:
  struct Event {
    Duration when;
    std::uint64_t seq;
    Task task;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.when != b.when ? a.when > b.when : a.seq > b.seq;
    }
  };

  Duration now_{0};
  std::uint64_t seq_ = 0;
  std::uint64_t executed_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::mt19937_64 rng_;
};

}  // namespace mpaxos::sim
