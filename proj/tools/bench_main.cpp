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

// Closed-loop workload against a running cluster.
//   bench --addr host:port [--addr ...] --clients N --duration S --read-frac F --seed N --out report.json

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "mpaxos/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop benchmark client"};
  mpaxos::WorkloadSpec spec;
  double duration_s = 20, warmup_s = 0;
  std::string out;
  std::string level = "warn";
  app.add_option("--addr", spec.addrs, "client address of each peer, in peer id order")
      ->required()
      ->delimiter(',');
  app.add_option("--clients", spec.clients, "closed-loop clients")->check(CLI::PositiveNumber);
  app.add_option("--duration", duration_s, "seconds")->check(CLI::PositiveNumber);
  app.add_option("--warmup", warmup_s, "seconds excluded from latency and throughput");
  app.add_option("--read-frac", spec.read_fraction, "fraction of gets")->check(CLI::Range(0.0, 1.0));
  app.add_option("--keys", spec.key_count, "key space size")->check(CLI::PositiveNumber);
  app.add_option("--theta", spec.zipf_theta, "zipfian skew");
  app.add_option("--value-len", spec.value_len, "bytes per value")->check(CLI::PositiveNumber);
  app.add_option("--seed", spec.seed, "RNG seed");
  app.add_option("--out", out, "write the report as JSON");
  app.add_option("--log-level", level, "spdlog level");
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(level));

  spec.duration = std::chrono::duration_cast<mpaxos::Duration>(std::chrono::duration<double>(duration_s));
  spec.warmup = std::chrono::duration_cast<mpaxos::Duration>(std::chrono::duration<double>(warmup_s));
  try {
    const auto report = mpaxos::run_workload(spec);
    std::printf("throughput %.1f op/s  avg %.2f ms  p50 %.2f ms  p99 %.2f ms  failures %lld%s\n",
                report.throughput_ops, report.latency_avg_ms, report.latency_p50_ms,
                report.latency_p99_ms, static_cast<long long>(report.failures),
                report.aborted ? "  (aborted)" : "");
    if (!out.empty()) {
      std::ofstream f(out);
      f << mpaxos::bench_report_to_json(report).dump(2) << "\n";
    }
    return report.aborted ? 1 : 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bench: %s\n", e.what());
    return 2;
  }
}
