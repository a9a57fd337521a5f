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
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>

#include "mpaxos/environment.hpp"
#include "mpaxos/net/transport.hpp"

namespace mpaxos::net {

// Wall-clock Environment: timers on a small thread pool, peer calls on a
// separate pool of blocking workers, replies delivered on those workers.
class ThreadedEnvironment : public Environment {
 public:
  ThreadedEnvironment(PeerClient& client, std::uint64_t seed, int io_threads = 32);
  ~ThreadedEnvironment() override;

  Duration now() override;
  void schedule(Duration delay, Task task) override;
  void send(PeerId to, Message request, Duration deadline, ReplyHandler on_reply) override;
  double uniform(double lo, double hi) override;

  // Drops pending timers and waits for in-flight calls to finish.
  void stop();

 private:
  struct Pools;

  PeerClient& client_;
  std::unique_ptr<Pools> pools_;
  std::atomic<bool> stopped_{false};
  Clock::time_point epoch_ = Clock::now();
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

}  // namespace mpaxos::net
