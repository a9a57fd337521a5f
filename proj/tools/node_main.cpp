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

// Runs one replica until SIGINT/SIGTERM.
//   node --config path [--sim]
// With --sim the configured cluster is simulated in-process instead.

#include <csignal>
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "mpaxos/node.hpp"
#include "mpaxos/sim/scenario.hpp"

namespace {

int run_simulated(const mpaxos::NodeConfig& config, int seconds) {
  mpaxos::sim::ScenarioScript script;
  script.name = "node_sim";
  script.cluster_size = static_cast<int>(config.peers.size());
  script.duration = std::chrono::seconds(seconds);
  script.seed = config.seed;
  script.engine = config.engine();
  const auto report = mpaxos::sim::run_scenario(script);
  std::printf("simulated %d peers for %ds: ops=%lld leaders=%zu violations=%zu\n",
              script.cluster_size, seconds, static_cast<long long>(report.completed_ops),
              report.leader_timeline.size(), report.invariant_violations.size());
  for (const auto& v : report.invariant_violations) std::printf("  violation: %s\n", v.c_str());
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MultiPaxos replicated key-value store node"};
  std::string config_path;
  bool simulate = false;
  int sim_seconds = 10;
  std::string level = "info";
  app.add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  app.add_flag("--sim", simulate, "simulate the configured cluster instead of serving");
  app.add_option("--sim-seconds", sim_seconds, "virtual run length for --sim")->check(CLI::PositiveNumber);
  app.add_option("--log-level", level, "spdlog level");
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(level));

  mpaxos::NodeConfig config;
  try {
    config = mpaxos::load_node_config(config_path);
    config.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "node: %s\n", e.what());
    return 2;
  }
  if (simulate) return run_simulated(config, sim_seconds);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  // Block before any thread starts so only sigwait sees them.
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    mpaxos::Node node(config);
    node.start();
    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("signal {}, stopping", sig);
    node.stop();
  } catch (const std::exception& e) {
    spdlog::critical("{}", e.what());
    return 1;
  }
  return 0;
}
