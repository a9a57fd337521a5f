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
#include <string>
#include <vector>

#include <json.hpp>

#include "mpaxos/environment.hpp"

namespace mpaxos {

struct WorkloadSpec {
  // Client addresses of the cluster, index = PeerId, so leader hints can be
  // followed. A single address also works; hints are then ignored.
  std::vector<std::string> addrs;
  int clients = 8;
  Duration duration = std::chrono::seconds(20);
  Duration warmup = Duration::zero();
  double read_fraction = 0.5;
  int key_count = 100000;
  double zipf_theta = 0.99;
  int key_len = 23;
  int value_len = 500;
  std::uint64_t seed = 1;
  Duration request_timeout = std::chrono::seconds(1);
  // Give up when nothing succeeds for this long.
  Duration abort_after = std::chrono::seconds(30);
  Duration bucket = std::chrono::milliseconds(100);

  void validate() const;  // throws std::invalid_argument
};

struct BenchReport {
  std::int64_t completed = 0;  // after warmup
  std::int64_t failures = 0;   // timeouts and connection errors
  std::int64_t retries = 0;
  std::int64_t redirects = 0;
  double throughput_ops = 0;
  double latency_avg_ms = 0;
  double latency_p50_ms = 0;
  double latency_p99_ms = 0;
  double latency_max_ms = 0;
  // Completions per bucket from the start of the run, warmup included.
  std::vector<std::int64_t> timeline;
  Duration bucket{};
  bool aborted = false;
};

// Closed loop: each client keeps exactly one request outstanding.
BenchReport run_workload(const WorkloadSpec& spec);

nlohmann::json bench_report_to_json(const BenchReport& report);

// Key for zipfian rank |rank|, padded to |len| bytes.
std::string bench_key(std::uint64_t rank, int len);

}  // namespace mpaxos
