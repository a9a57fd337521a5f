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

#include <json.hpp>

#include "mpaxos/core.hpp"

namespace mpaxos {

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wire form of a Message: canonical JSON (sorted keys, no whitespace)
//   {"payload": {...}, "type": "<variant name>"}
// Response payloads carry "type": "ok" | "reject". A reject carries "ballot"
// and no ok-only payload; an ok never carries "ballot".
std::string encode(const Message& message);
Message decode(std::string_view text);

nlohmann::json command_to_json(const Command& command);
Command command_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

// 4-byte big-endian length prefix.
inline constexpr std::size_t kFrameHeaderSize = 4;
inline constexpr std::uint32_t kMaxFrameSize = 64u << 20;

std::string frame(std::string_view payload);
std::uint32_t parse_frame_header(const char header[kFrameHeaderSize]);

}  // namespace mpaxos
