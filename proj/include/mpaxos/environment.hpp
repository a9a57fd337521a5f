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

#include <chrono>
#include <functional>
#include <optional>

#include "mpaxos/core.hpp"

namespace mpaxos {

using Duration = std::chrono::microseconds;

// Everything the engine needs from the outside world: a clock, timers, a way
// to reach peers, and randomness. The simulator implements it on virtual time;
// deployments use ThreadedEnvironment over real sockets.
//
// Implementations must never run a callback synchronously from inside
// schedule() or send().
class Environment {
 public:
  using Task = std::function<void()>;
  using ReplyHandler = std::function<void(std::optional<Message>)>;

  virtual ~Environment() = default;

  virtual Duration now() = 0;
  virtual void schedule(Duration delay, Task task) = 0;
  // Sends |request| to |to| and eventually calls |on_reply| exactly once:
  // with the response, or with nullopt on timeout, drop, or decode failure.
  virtual void send(PeerId to, Message request, Duration deadline, ReplyHandler on_reply) = 0;
  // Uniform real in [lo, hi].
  virtual double uniform(double lo, double hi) = 0;
};

}  // namespace mpaxos
