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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mpaxos/core.hpp"
#include "mpaxos/environment.hpp"

namespace mpaxos {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Multipliers are relative to the base commit interval.
struct AdaptiveTimeoutConfig {
  bool enabled = true;
  int k = 3;
  double window_multiplier = 10.0;
  double cap_multiplier = 8.0;
  double quiet_multiplier = 10.0;
};

enum class GapFillMode { kOff, kRetransmit };

struct GapFillConfig {
  GapFillMode mode = GapFillMode::kRetransmit;
  int stall_rounds = 5;
  int batch_cap = 64;
};

struct EngineConfig {
  PeerId id;
  int num_peers = 1;
  Duration commit_interval = std::chrono::milliseconds(50);
  double election_multiplier_lo = 1.5;
  double election_multiplier_hi = 2.0;
  Duration rpc_timeout = std::chrono::milliseconds(10);
  AdaptiveTimeoutConfig adaptive;
  GapFillConfig gap_fill;
  // Upper bound on concurrently running accept phases during replay.
  int replay_window = 64;
  // Mutation switch for checker self-tests: accept handlers take any ballot.
  bool skip_accept_ballot_check = false;

  // Throws ConfigError.
  void validate() const;
};

struct NodeConfig {
  PeerId id;
  std::vector<std::string> peers;  // host:port, index = PeerId
  int client_port = 0;
  int commit_interval_ms = 300;
  double election_multiplier_lo = 1.5;
  double election_multiplier_hi = 2.0;
  int rpc_timeout_ms = 200;
  AdaptiveTimeoutConfig adaptive;
  GapFillConfig gap_fill;
  std::uint64_t seed = 1;

  EngineConfig engine() const;
  void validate() const;
};

AdaptiveTimeoutConfig adaptive_from_json(const nlohmann::json& j);
nlohmann::json adaptive_to_json(const AdaptiveTimeoutConfig& c);
GapFillConfig gap_fill_from_json(const nlohmann::json& j);
nlohmann::json gap_fill_to_json(const GapFillConfig& c);

NodeConfig node_config_from_json(const nlohmann::json& j);
nlohmann::json node_config_to_json(const NodeConfig& config);
// Reads a JSON file and applies the NODE_ID and CLIENT_PORT overrides.
NodeConfig load_node_config(const std::string& path);

std::string_view to_string(GapFillMode mode);
std::optional<GapFillMode> parse_gap_fill_mode(std::string_view text);

struct HostPort {
  std::string host;
  std::uint16_t port = 0;
};
HostPort parse_host_port(std::string_view text);

}  // namespace mpaxos
