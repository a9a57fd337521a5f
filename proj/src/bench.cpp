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

#include "mpaxos/bench.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <spdlog/spdlog.h>

#include "mpaxos/client_protocol.hpp"
#include "mpaxos/codec.hpp"
#include "mpaxos/net/socket.hpp"
#include "mpaxos/zipfian.hpp"

namespace mpaxos {

namespace {

using net::Clock;

double to_ms(Clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); }

struct Shared {
  const WorkloadSpec& spec;
  Clock::time_point start;
  Clock::time_point measure_from;
  Clock::time_point end;
  std::vector<std::atomic<std::int64_t>> timeline;
  std::atomic<std::int64_t> last_success_ns;
  std::atomic<bool> abort{false};
  std::atomic<std::int64_t> failures{0}, retries{0}, redirects{0};
  std::mutex mu;
  std::vector<double> latencies_ms;

  Shared(const WorkloadSpec& s, std::size_t buckets)
      : spec(s), timeline(buckets), last_success_ns(0) {}
};

void client_loop(Shared& shared, int index) {
  const WorkloadSpec& spec = shared.spec;
  std::mt19937_64 rng(spec.seed * 1000003 + static_cast<std::uint64_t>(index));
  ZipfianGenerator zipf(static_cast<std::uint64_t>(spec.key_count), spec.zipf_theta);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::string value(static_cast<std::size_t>(spec.value_len), 'x');
  for (char& c : value) c = static_cast<char>(letter(rng));

  const int n = static_cast<int>(spec.addrs.size());
  int target = index % n;
  std::vector<double> latencies;
  net::Socket socket;
  std::uint64_t request_id = 0;

  auto rotate = [&] {
    socket.close();
    target = (target + 1) % n;
  };

  while (Clock::now() < shared.end && !shared.abort) {
    if (!socket.valid()) {
      try {
        socket = net::connect_to(parse_host_port(spec.addrs[static_cast<std::size_t>(target)]),
                                 Clock::now() + spec.request_timeout);
      } catch (const std::exception&) {
        ++shared.failures;
        rotate();
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        continue;
      }
    }
    const std::string key = bench_key(zipf(rng), spec.key_len);
    Command command;
    if (coin(rng) < spec.read_fraction) {
      command = Command::get(key);
    } else {
      value[static_cast<std::size_t>(request_id % value.size())] = static_cast<char>(letter(rng));
      command = Command::put(key, value);
    }
    const ClientRequest request{++request_id, std::move(command)};
    const auto sent = Clock::now();
    const auto deadline = sent + spec.request_timeout;
    std::optional<ClientResponse> response;
    if (net::write_frame(socket, encode_client_request(request), deadline)) {
      if (auto payload = net::read_frame(socket, deadline)) {
        try {
          response = decode_client_response(*payload);
        } catch (const CodecError&) {
        }
      }
    }
    if (!response || response->request_id != request.request_id) {
      ++shared.failures;
      rotate();
      continue;
    }
    const auto done = Clock::now();
    switch (response->outcome) {
      case ClientOutcome::kOk: {
        shared.last_success_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(done - shared.start).count();
        const auto bucket = static_cast<std::size_t>((done - shared.start) / spec.bucket);
        if (bucket < shared.timeline.size()) ++shared.timeline[bucket];
        if (sent >= shared.measure_from) latencies.push_back(to_ms(done - sent));
        break;
      }
      case ClientOutcome::kLeaderHint:
        ++shared.redirects;
        if (response->leader && response->leader->value < n && response->leader->value != target) {
          socket.close();
          target = static_cast<int>(response->leader->value);
        } else {
          std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
        break;
      case ClientOutcome::kRetry:
        ++shared.retries;
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        break;
    }
  }
  std::lock_guard lock(shared.mu);
  shared.latencies_ms.insert(shared.latencies_ms.end(), latencies.begin(), latencies.end());
}

double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[std::min(sorted.size() - 1, rank == 0 ? 0 : rank - 1)];
}

}  // namespace

void WorkloadSpec::validate() const {
  if (addrs.empty()) throw std::invalid_argument("at least one address is required");
  for (const auto& a : addrs) parse_host_port(a);
  if (clients < 1) throw std::invalid_argument("clients must be >= 1");
  if (duration <= Duration::zero()) throw std::invalid_argument("duration must be positive");
  if (warmup < Duration::zero() || warmup >= duration)
    throw std::invalid_argument("warmup must be shorter than the run");
  if (read_fraction < 0 || read_fraction > 1) throw std::invalid_argument("read fraction must be in [0, 1]");
  if (key_count < 1 || key_len < 1 || value_len < 1) throw std::invalid_argument("bad key/value sizes");
  if (bucket <= Duration::zero()) throw std::invalid_argument("bucket must be positive");
}

std::string bench_key(std::uint64_t rank, int len) {
  std::string digits = std::to_string(rank);
  std::string key = "user";
  const auto width = static_cast<std::size_t>(std::max(0, len - 4));
  if (digits.size() < width) key.append(width - digits.size(), '0');
  key += digits;
  return key;
}

BenchReport run_workload(const WorkloadSpec& spec) {
  spec.validate();
  const auto buckets = static_cast<std::size_t>((spec.duration + spec.bucket - Duration(1)) / spec.bucket);
  Shared shared(spec, buckets);
  shared.start = Clock::now();
  shared.measure_from = shared.start + spec.warmup;
  shared.end = shared.start + spec.duration;

  std::vector<std::thread> workers;
  for (int i = 0; i < spec.clients; ++i) workers.emplace_back([&shared, i] { client_loop(shared, i); });

  // Watchdog for sustained unavailability.
  while (Clock::now() < shared.end) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    const auto since_start = Clock::now() - shared.start;
    const auto last = std::chrono::nanoseconds(shared.last_success_ns.load());
    if (since_start - last > spec.abort_after) {
      spdlog::error("no successful request for {}s, aborting",
                    std::chrono::duration_cast<std::chrono::seconds>(spec.abort_after).count());
      shared.abort = true;
      break;
    }
  }
  for (auto& w : workers) w.join();

  BenchReport report;
  report.aborted = shared.abort;
  report.bucket = spec.bucket;
  report.failures = shared.failures;
  report.retries = shared.retries;
  report.redirects = shared.redirects;
  for (auto& b : shared.timeline) report.timeline.push_back(b.load());
  auto& lat = shared.latencies_ms;
  std::sort(lat.begin(), lat.end());
  report.completed = static_cast<std::int64_t>(lat.size());
  const double measured_s =
      std::chrono::duration<double>(std::min(Clock::now(), shared.end) - shared.measure_from).count();
  if (measured_s > 0) report.throughput_ops = static_cast<double>(lat.size()) / measured_s;
  if (!lat.empty()) {
    double sum = 0;
    for (double l : lat) sum += l;
    report.latency_avg_ms = sum / static_cast<double>(lat.size());
    report.latency_p50_ms = percentile(lat, 0.50);
    report.latency_p99_ms = percentile(lat, 0.99);
    report.latency_max_ms = lat.back();
  }
  return report;
}

nlohmann::json bench_report_to_json(const BenchReport& r) {
  return nlohmann::json{
      {"completed", r.completed},
      {"failures", r.failures},
      {"retries", r.retries},
      {"redirects", r.redirects},
      {"throughput_ops", r.throughput_ops},
      {"latency_avg_ms", r.latency_avg_ms},
      {"latency_p50_ms", r.latency_p50_ms},
      {"latency_p99_ms", r.latency_p99_ms},
      {"latency_max_ms", r.latency_max_ms},
      {"bucket_ms", std::chrono::duration_cast<std::chrono::milliseconds>(r.bucket).count()},
      {"timeline", r.timeline},
      {"aborted", r.aborted}};
}

}  // namespace mpaxos
