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

#include <gtest/gtest.h>

#include <vector>

#include "mpaxos/sim/agreement.hpp"
#include "mpaxos/sim/scenario.hpp"
#include "mpaxos/sim/scheduler.hpp"

namespace mpaxos::sim {
namespace {

using namespace std::chrono_literals;

TEST(Scheduler, OrdersByTimeThenInsertion) {
  Scheduler s(1);
  std::vector<int> order;
  s.at(5ms, [&] { order.push_back(3); });
  s.at(1ms, [&] { order.push_back(1); });
  s.at(5ms, [&] { order.push_back(4); });
  s.at(1ms, [&] { order.push_back(2); s.after(0us, [&] { order.push_back(5); }); });
  s.run_until(3ms);
  EXPECT_EQ(order, (std::vector<int>{1, 2, 5}));
  EXPECT_EQ(s.now(), 3ms);
  s.run_until(10ms);
  EXPECT_EQ(order, (std::vector<int>{1, 2, 5, 3, 4}));
  EXPECT_FALSE(s.step());
}

// --- check_agreement --------------------------------------------------------

std::vector<ExecutedEntry> history(std::initializer_list<const char*> values) {
  std::vector<ExecutedEntry> out;
  for (const char* v : values)
    out.push_back({static_cast<LogIndex>(out.size()) + 1, Command::put("k", v)});
  return out;
}

TEST(CheckAgreement, PrefixesAgree) {
  auto a = history({"1", "2", "3"});
  auto b = history({"1", "2"});
  KVStore sa, sb;
  for (const auto& e : a) sa.apply(e.command);
  for (const auto& e : b) sb.apply(e.command);
  EXPECT_TRUE(check_agreement({a, b, {}}, {&sa, &sb, nullptr}).empty());
}

TEST(CheckAgreement, DivergenceIsReported) {
  EXPECT_EQ(check_agreement({history({"1", "2"}), history({"1", "x"})}, {}).size(), 1u);
}

TEST(CheckAgreement, HoleIsReported) {
  auto h = history({"1", "2"});
  h[1].index = 3;
  EXPECT_FALSE(check_agreement({h}, {}).empty());
}

TEST(CheckAgreement, StateMachineMismatchIsReported) {
  KVStore wrong;
  wrong.apply(Command::put("k", "9"));
  EXPECT_EQ(check_agreement({history({"1"})}, {&wrong}).size(), 1u);
}

// --- scenarios ------------------------------------------------------------------

TEST(Scenario, SameSeedSameRun) {
  for (const char* name : {"chained_churn", "random_faults"}) {
    auto a = run_scenario(builtin_scenario(name, 42));
    auto b = run_scenario(builtin_scenario(name, 42));
    EXPECT_EQ(a.trace_hash, b.trace_hash) << name;
    EXPECT_EQ(report_to_json(a), report_to_json(b)) << name;
    auto c = run_scenario(builtin_scenario(name, 43));
    EXPECT_NE(a.trace_hash, c.trace_hash) << name;
  }
}

TEST(Scenario, BuiltinsRunClean) {
  for (const auto& name : builtin_scenario_names()) {
    auto script = builtin_scenario(name, 1);
    EXPECT_NO_THROW(script.validate()) << name;
    auto report = run_scenario(script);
    EXPECT_TRUE(report.ok()) << name << ": " << report.invariant_violations.front();
    EXPECT_GT(report.completed_ops, 0) << name;
    EXPECT_LE(report.max_inflight, script.workload.clients) << name;
    EXPECT_FALSE(report.leader_timeline.empty()) << name;
  }
}

TEST(Scenario, RandomFaultsHoldSafety) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto report = run_scenario(builtin_scenario("random_faults", seed));
    ASSERT_TRUE(report.ok()) << "seed " << seed << ": " << report.invariant_violations.front();
  }
}

TEST(Scenario, LogsStayValidAtEverySample) {
  auto report = run_scenario(builtin_scenario("compaction_common", 3));
  ASSERT_FALSE(report.samples.empty());
  for (const auto& s : report.samples)
    for (std::size_t p = 0; p < s.gle.size(); ++p) ASSERT_LE(s.gle[p], s.last_executed[p]);
}

// The checker must notice when acceptors stop comparing ballots.
TEST(Scenario, CheckerCatchesBrokenAcceptRule) {
  int caught = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto script = builtin_scenario("chained_churn_classic", seed);
    script.engine.skip_accept_ballot_check = true;
    caught += !run_scenario(script).ok();
  }
  EXPECT_EQ(caught, 5);
}

TEST(Scenario, UnknownNameThrows) {
  EXPECT_THROW(builtin_scenario("nope", 1), std::invalid_argument);
}

TEST(Scenario, ValidateRejectsBadScripts) {
  auto script = builtin_scenario("chained_churn", 1);
  script.events.push_back(script.events.front());  // out of order
  EXPECT_THROW(script.validate(), std::invalid_argument);

  script = builtin_scenario("chained_churn", 1);
  script.events.front().from = "follower9";
  EXPECT_THROW(script.validate(), std::invalid_argument);

  script = builtin_scenario("chained_churn", 1);
  script.cluster_size = 0;
  EXPECT_THROW(script.validate(), std::invalid_argument);
}

TEST(ScenarioJson, RoundTrip) {
  for (const auto& name : builtin_scenario_names()) {
    auto script = builtin_scenario(name, 5);
    auto j = script_to_json(script);
    EXPECT_EQ(script_to_json(script_from_json(j)), j) << name;
  }
}

TEST(ScenarioJson, ScriptFromJsonRuns) {
  auto j = nlohmann::json::parse(R"({
    "name": "custom", "cluster_size": 3, "duration_ms": 3000, "seed": 9,
    "workload": {"clients": 2},
    "events": [
      {"at_ms": 1000, "action": "crash", "node": "leader"},
      {"at_ms": 2000, "action": "restart", "node": "0"},
      {"at_ms": 2000, "action": "heal_all"}
    ]
  })");
  auto report = run_scenario(script_from_json(j));
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.scenario, "custom");
  EXPECT_TRUE(report.resolved_selectors.count(1000));
}

}  // namespace
}  // namespace mpaxos::sim
