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
#include <string>
#include <string_view>

#include "mpaxos/core.hpp"

namespace mpaxos {

struct ClientRequest {
  std::uint64_t request_id = 0;
  Command command;

  friend bool operator==(const ClientRequest&, const ClientRequest&) = default;
};

enum class ClientOutcome { kOk, kRetry, kLeaderHint };

struct ClientResponse {
  std::uint64_t request_id = 0;
  ClientOutcome outcome = ClientOutcome::kRetry;
  // Set on ok for gets that found the key.
  std::optional<std::string> value;
  // Set on leader_hint.
  std::optional<PeerId> leader;

  friend bool operator==(const ClientResponse&, const ClientResponse&) = default;
};

std::string_view to_string(ClientOutcome outcome);

// Same JSON conventions as the peer codec. Decoders throw CodecError.
std::string encode_client_request(const ClientRequest& request);
ClientRequest decode_client_request(std::string_view text);
std::string encode_client_response(const ClientResponse& response);
ClientResponse decode_client_response(std::string_view text);

}  // namespace mpaxos
