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

#include "mpaxos/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

namespace mpaxos {

using nlohmann::json;

void EngineConfig::validate() const {
  if (!id.valid()) throw ConfigError("id must be in [0, 15)");
  if (num_peers < 1 || num_peers > kMaxNumPeers) throw ConfigError("num_peers out of range");
  if (id.value >= num_peers) throw ConfigError("id must be < num_peers");
  if (commit_interval.count() <= 0) throw ConfigError("commit_interval must be positive");
  if (election_multiplier_lo <= 0 || election_multiplier_hi < election_multiplier_lo)
    throw ConfigError("election multipliers must satisfy 0 < lo <= hi");
  if (rpc_timeout.count() <= 0) throw ConfigError("rpc_timeout must be positive");
  if (adaptive.k < 1) throw ConfigError("adaptive_timeout.k must be >= 1");
  if (adaptive.window_multiplier <= 0 || adaptive.quiet_multiplier <= 0)
    throw ConfigError("adaptive_timeout multipliers must be positive");
  if (adaptive.cap_multiplier < 1) throw ConfigError("adaptive_timeout.cap_multiplier must be >= 1");
  if (gap_fill.stall_rounds < 1 || gap_fill.batch_cap < 1)
    throw ConfigError("gap_fill.stall_rounds and batch_cap must be >= 1");
  if (replay_window < 1) throw ConfigError("replay_window must be >= 1");
}

EngineConfig NodeConfig::engine() const {
  EngineConfig e;
  e.id = id;
  e.num_peers = static_cast<int>(peers.size());
  e.commit_interval = std::chrono::milliseconds(commit_interval_ms);
  e.election_multiplier_lo = election_multiplier_lo;
  e.election_multiplier_hi = election_multiplier_hi;
  e.rpc_timeout = std::chrono::milliseconds(rpc_timeout_ms);
  e.adaptive = adaptive;
  e.gap_fill = gap_fill;
  return e;
}

void NodeConfig::validate() const {
  if (peers.empty()) throw ConfigError("peers must not be empty");
  if (id.value < 0 || id.value >= static_cast<std::int64_t>(peers.size()))
    throw ConfigError("id must index into peers");
  if (commit_interval_ms <= 0) throw ConfigError("commit_interval_ms must be positive");
  if (client_port < 0 || client_port > 65535) throw ConfigError("client_port out of range");
  for (const auto& peer : peers) parse_host_port(peer);
  engine().validate();
}

AdaptiveTimeoutConfig adaptive_from_json(const json& a) {
  AdaptiveTimeoutConfig c;
  c.enabled = a.value("enabled", c.enabled);
  c.k = a.value("k", c.k);
  c.window_multiplier = a.value("window_multiplier", c.window_multiplier);
  c.cap_multiplier = a.value("cap_multiplier", c.cap_multiplier);
  c.quiet_multiplier = a.value("quiet_multiplier", c.quiet_multiplier);
  return c;
}

json adaptive_to_json(const AdaptiveTimeoutConfig& c) {
  return json{{"enabled", c.enabled},
              {"k", c.k},
              {"window_multiplier", c.window_multiplier},
              {"cap_multiplier", c.cap_multiplier},
              {"quiet_multiplier", c.quiet_multiplier}};
}

GapFillConfig gap_fill_from_json(const json& g) {
  GapFillConfig c;
  if (auto mode = g.find("mode"); mode != g.end()) {
    auto parsed = parse_gap_fill_mode(mode->get<std::string>());
    if (!parsed) throw ConfigError("gap_fill.mode must be off or retransmit");
    c.mode = *parsed;
  }
  c.stall_rounds = g.value("stall_rounds", c.stall_rounds);
  c.batch_cap = g.value("batch_cap", c.batch_cap);
  return c;
}

json gap_fill_to_json(const GapFillConfig& c) {
  return json{{"mode", to_string(c.mode)},
              {"stall_rounds", c.stall_rounds},
              {"batch_cap", c.batch_cap}};
}

NodeConfig node_config_from_json(const json& j) {
  NodeConfig c;
  try {
    c.id = PeerId{j.at("id").get<std::int64_t>()};
    c.peers = j.at("peers").get<std::vector<std::string>>();
    c.client_port = j.value("client_port", c.client_port);
    c.commit_interval_ms = j.value("commit_interval_ms", c.commit_interval_ms);
    c.election_multiplier_lo = j.value("election_multiplier_lo", c.election_multiplier_lo);
    c.election_multiplier_hi = j.value("election_multiplier_hi", c.election_multiplier_hi);
    c.rpc_timeout_ms = j.value("rpc_timeout_ms", c.rpc_timeout_ms);
    c.seed = j.value("seed", c.seed);
    if (auto it = j.find("adaptive_timeout"); it != j.end()) c.adaptive = adaptive_from_json(*it);
    if (auto it = j.find("gap_fill"); it != j.end()) c.gap_fill = gap_fill_from_json(*it);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  return c;
}

json node_config_to_json(const NodeConfig& c) {
  return json{{"id", c.id.value},
              {"peers", c.peers},
              {"client_port", c.client_port},
              {"commit_interval_ms", c.commit_interval_ms},
              {"election_multiplier_lo", c.election_multiplier_lo},
              {"election_multiplier_hi", c.election_multiplier_hi},
              {"rpc_timeout_ms", c.rpc_timeout_ms},
              {"seed", c.seed},
              {"adaptive_timeout", adaptive_to_json(c.adaptive)},
              {"gap_fill", gap_fill_to_json(c.gap_fill)}};
}

namespace {

int parse_int_env(const char* name, const char* text) {
  int value = 0;
  std::string_view s(text);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(std::string(name) + " is not an integer");
  return value;
}

}  // namespace

NodeConfig load_node_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  NodeConfig c = node_config_from_json(j);
  if (const char* id = std::getenv("NODE_ID")) c.id = PeerId{parse_int_env("NODE_ID", id)};
  if (const char* port = std::getenv("CLIENT_PORT"))
    c.client_port = parse_int_env("CLIENT_PORT", port);
  c.validate();
  return c;
}

std::string_view to_string(GapFillMode mode) {
  return mode == GapFillMode::kOff ? "off" : "retransmit";
}

std::optional<GapFillMode> parse_gap_fill_mode(std::string_view text) {
  if (text == "off") return GapFillMode::kOff;
  if (text == "retransmit") return GapFillMode::kRetransmit;
  return std::nullopt;
}

HostPort parse_host_port(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0)
    throw ConfigError("expected host:port, got '" + std::string(text) + "'");
  unsigned port = 0;
  auto digits = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port > 65535)
    throw ConfigError("bad port in '" + std::string(text) + "'");
  return {std::string(text.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

}  // namespace mpaxos
