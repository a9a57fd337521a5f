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

#include "mpaxos/sim/scheduler.hpp"

#include <algorithm>

namespace mpaxos::sim {

void Scheduler::at(Duration when, Task task) {
  queue_.push(Event{std::max(when, now_), seq_++, std::move(task)});
}

bool Scheduler::step() {
  if (queue_.empty()) return false;
  // priority_queue::top is const; the task is moved out via const_cast since
  // the element is popped immediately after.
  Event event = std::move(const_cast<Event&>(queue_.top()));
  queue_.pop();
  now_ = event.when;
  ++executed_;
  event.task();
  return true;
}

void Scheduler::run_until(Duration until) {
  while (!queue_.empty() && queue_.top().when <= until) step();
  now_ = std::max(now_, until);
}

double Scheduler::uniform(double lo, double hi) {
  if (hi <= lo) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

}  // namespace mpaxos::sim
