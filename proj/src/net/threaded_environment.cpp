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

#include "mpaxos/net/threaded_environment.hpp"

#include <boost/asio/post.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/thread_pool.hpp>

namespace mpaxos::net {

struct ThreadedEnvironment::Pools {
  explicit Pools(int io_threads) : timers(1), io(static_cast<std::size_t>(io_threads)) {}
  boost::asio::thread_pool timers;
  boost::asio::thread_pool io;
};

ThreadedEnvironment::ThreadedEnvironment(PeerClient& client, std::uint64_t seed, int io_threads)
    : client_(client), pools_(std::make_unique<Pools>(io_threads)), rng_(seed) {}

ThreadedEnvironment::~ThreadedEnvironment() { stop(); }

Duration ThreadedEnvironment::now() {
  return std::chrono::duration_cast<Duration>(Clock::now() - epoch_);
}

void ThreadedEnvironment::schedule(Duration delay, Task task) {
  if (stopped_) return;
  auto timer = std::make_shared<boost::asio::steady_timer>(pools_->timers, delay);
  timer->async_wait([this, timer, task = std::move(task)](const boost::system::error_code& ec) {
    if (ec || stopped_) return;
    // Engine callbacks may block briefly on locks; keep the timer thread free.
    boost::asio::post(pools_->io, task);
  });
}

void ThreadedEnvironment::send(PeerId to, Message request, Duration deadline, ReplyHandler on_reply) {
  if (stopped_) return;
  boost::asio::post(pools_->io, [this, to, request = std::move(request), deadline,
                                 on_reply = std::move(on_reply)] {
    std::optional<Message> reply;
    if (!stopped_) reply = client_.call(to, request, deadline);
    on_reply(std::move(reply));
  });
}

double ThreadedEnvironment::uniform(double lo, double hi) {
  std::lock_guard lock(rng_mu_);
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

void ThreadedEnvironment::stop() {
  if (stopped_.exchange(true)) return;
  pools_->timers.stop();
  pools_->timers.join();
  pools_->io.join();
}

}  // namespace mpaxos::net
