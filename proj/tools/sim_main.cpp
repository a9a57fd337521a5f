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

// Deterministic scenario runner.
//   sim run --scenario NAME|--script FILE [--seed N] [--report OUT]
//   sim sweep --seeds A..B [--scenario NAME]...

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "mpaxos/sim/scenario.hpp"

namespace {

using mpaxos::sim::RunReport;
using mpaxos::sim::ScenarioScript;

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw CLI::ValidationError("--seeds", "expected A..B, got " + text);
    return v;
  };
  if (dots == std::string::npos) {
    const auto v = number(text);
    return {v, v};
  }
  const auto a = number(std::string_view(text).substr(0, dots));
  const auto b = number(std::string_view(text).substr(dots + 2));
  if (b < a) throw CLI::ValidationError("--seeds", "empty range " + text);
  return {a, b};
}

void print_summary(const RunReport& r) {
  std::printf("scenario=%s seed=%llu ok=%s ops=%lld elections=%zu leaders=%zu violations=%zu trace=%016llx\n",
              r.scenario.c_str(), static_cast<unsigned long long>(r.seed), r.ok() ? "true" : "false",
              static_cast<long long>(r.completed_ops), r.election_log.size(), r.leader_timeline.size(),
              r.invariant_violations.size(), static_cast<unsigned long long>(r.trace_hash));
  for (const auto& v : r.invariant_violations) std::printf("  violation: %s\n", v.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MultiPaxos deterministic simulator"};
  app.require_subcommand(1);
  std::string level = "warn";
  app.add_option("--log-level", level, "spdlog level");

  auto* run = app.add_subcommand("run", "run one scenario");
  std::string scenario, script_path, report_path;
  std::optional<std::uint64_t> seed;
  auto* by_name = run->add_option("--scenario", scenario, "built-in scenario name");
  auto* by_file = run->add_option("--script", script_path, "scenario script (JSON)")->check(CLI::ExistingFile);
  by_name->excludes(by_file);
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--report", report_path, "write the run report as JSON");

  auto* sweep = app.add_subcommand("sweep", "run scenarios across a seed range");
  std::string seeds = "1..100";
  std::vector<std::string> sweep_names = {"leader_losing_quorum", "chained_churn",
                                          "compaction_disconnect", "random_faults"};
  sweep->add_option("--seeds", seeds, "inclusive seed range A..B");
  sweep->add_option("--scenario", sweep_names, "scenario names (repeatable)");

  auto* list = app.add_subcommand("list", "list built-in scenarios");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(level));

  try {
    if (*list) {
      for (const auto& n : mpaxos::sim::builtin_scenario_names()) std::printf("%s\n", n.c_str());
      return 0;
    }
    if (*run) {
      ScenarioScript script;
      if (!script_path.empty()) {
        std::ifstream in(script_path);
        script = mpaxos::sim::script_from_json(nlohmann::json::parse(in));
        if (seed) script.seed = *seed;
      } else if (!scenario.empty()) {
        script = mpaxos::sim::builtin_scenario(scenario, seed.value_or(1));
      } else {
        std::fprintf(stderr, "run: one of --scenario or --script is required\n");
        return 2;
      }
      const RunReport report = mpaxos::sim::run_scenario(script);
      print_summary(report);
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << mpaxos::sim::report_to_json(report).dump(2) << "\n";
      }
      return report.ok() ? 0 : 1;
    }
    const auto [from, to] = parse_range(seeds);
    const auto started = std::chrono::steady_clock::now();
    std::size_t runs = 0, failed = 0;
    for (const auto& name : sweep_names) {
      std::size_t scenario_failed = 0;
      for (std::uint64_t s = from; s <= to; ++s) {
        const RunReport r = mpaxos::sim::run_scenario(mpaxos::sim::builtin_scenario(name, s));
        ++runs;
        if (!r.ok()) {
          ++scenario_failed;
          print_summary(r);
        }
      }
      failed += scenario_failed;
      std::printf("%-24s seeds %llu..%llu failed=%zu\n", name.c_str(),
                  static_cast<unsigned long long>(from), static_cast<unsigned long long>(to),
                  scenario_failed);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("sweep: %zu runs, %zu failed, %.1fs\n", runs, failed, secs);
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sim: %s\n", e.what());
    return 2;
  }
}
