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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpaxos/config.hpp"
#include "mpaxos/sim/cluster.hpp"

namespace mpaxos::sim {

// Peers in scenario events are named by selector: a number ("2"), "leader"
// (whoever leads when the event fires), or "followerN" (the N-th non-leader
// peer in id order). Selectors are resolved once per distinct timestamp, so
// several events at the same instant see the same assignment.
struct ScenarioEvent {
  enum class Action { kSetLink, kIsolate, kCrash, kRestart, kHealAll };
  Duration at{};
  Action action = Action::kHealAll;
  std::string from;  // set_link; also the peer for isolate/crash/restart
  std::string to;    // set_link
  bool up = false;
  bool both_directions = true;
};

struct Workload {
  enum class KeyDist { kZipfian, kUniform };
  int clients = 3;
  Duration think = std::chrono::milliseconds(20);
  Duration client_latency = std::chrono::microseconds(500);
  Duration request_timeout = std::chrono::milliseconds(250);
  KeyDist key_dist = KeyDist::kZipfian;
  double zipf_theta = 0.99;
  int key_count = 1000;
  double read_fraction = 0.5;
  int value_len = 16;
};

struct ScenarioScript {
  std::string name;
  int cluster_size = 3;
  Duration duration = std::chrono::seconds(18);
  std::vector<ScenarioEvent> events;
  Workload workload;
  std::uint64_t seed = 1;
  // Engine settings shared by every peer (id and num_peers are filled in).
  EngineConfig engine;
  LinkModel links;
  // Metric sampling period; defaults to the commit interval.
  std::optional<Duration> sample_interval;

  void validate() const;
};

struct Sample {
  Duration at{};
  std::vector<std::int64_t> log_len;
  std::vector<LogIndex> gle;
  std::vector<LogIndex> last_executed;
  std::optional<PeerId> leader;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<LeaderRecord> leader_timeline;
  std::vector<ElectionRecord> election_log;
  std::vector<std::int64_t> elections_initiated;
  std::vector<Sample> samples;
  std::vector<std::int64_t> committed_per_interval;
  std::vector<CommitRoundRecord> commit_rounds;
  std::vector<std::string> invariant_violations;
  // What selectors resolved to, keyed by event time in ms.
  std::map<std::int64_t, std::map<std::string, std::int64_t>> resolved_selectors;
  std::int64_t completed_ops = 0;
  std::int64_t max_inflight = 0;
  Duration max_rtt{};
  std::uint64_t trace_hash = 0;
  std::uint64_t events_executed = 0;

  bool ok() const { return invariant_violations.empty(); }
};

// Boots the cluster, applies events, drives the closed-loop workload, samples
// metrics every interval, and checks agreement at the end.
RunReport run_scenario(const ScenarioScript& script);

// Names accepted by builtin_scenario().
std::vector<std::string> builtin_scenario_names();
// Throws std::invalid_argument for unknown names. |seed| also drives the
// randomly generated event list of "random_faults".
ScenarioScript builtin_scenario(const std::string& name, std::uint64_t seed);

ScenarioScript script_from_json(const nlohmann::json& j);
nlohmann::json script_to_json(const ScenarioScript& script);
nlohmann::json report_to_json(const RunReport& report);

}  // namespace mpaxos::sim
