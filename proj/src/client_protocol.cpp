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

#include "mpaxos/client_protocol.hpp"

#include <json.hpp>

#include "mpaxos/codec.hpp"

namespace mpaxos {

using nlohmann::json;

namespace {

json parse_object(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw CodecError("client message is not a JSON object");
  return j;
}

std::string dump(const json& j) {
  try {
    return j.dump(-1, ' ', false, json::error_handler_t::strict);
  } catch (const json::exception& e) {
    throw CodecError(e.what());
  }
}

std::uint64_t request_id_of(const json& j) {
  auto it = j.find("request_id");
  if (it == j.end() || !it->is_number_unsigned()) throw CodecError("request_id must be unsigned");
  return it->get<std::uint64_t>();
}

}  // namespace

std::string_view to_string(ClientOutcome outcome) {
  switch (outcome) {
    case ClientOutcome::kOk: return "ok";
    case ClientOutcome::kRetry: return "retry";
    case ClientOutcome::kLeaderHint: return "leader_hint";
  }
  return "?";
}

std::string encode_client_request(const ClientRequest& request) {
  return dump(json{{"request_id", request.request_id}, {"command", command_to_json(request.command)}});
}

ClientRequest decode_client_request(std::string_view text) {
  const json j = parse_object(text);
  if (j.size() != 2 || !j.contains("command")) throw CodecError("client request needs request_id and command");
  return ClientRequest{request_id_of(j), command_from_json(j.at("command"))};
}

std::string encode_client_response(const ClientResponse& response) {
  json j{{"request_id", response.request_id}, {"outcome", to_string(response.outcome)}};
  if (response.value) j["value"] = *response.value;
  if (response.leader) j["leader"] = response.leader->value;
  return dump(j);
}

ClientResponse decode_client_response(std::string_view text) {
  const json j = parse_object(text);
  ClientResponse r;
  r.request_id = request_id_of(j);
  const auto outcome = j.find("outcome");
  if (outcome == j.end() || !outcome->is_string()) throw CodecError("outcome missing");
  const auto name = outcome->get<std::string>();
  if (name == "ok") {
    r.outcome = ClientOutcome::kOk;
  } else if (name == "retry") {
    r.outcome = ClientOutcome::kRetry;
  } else if (name == "leader_hint") {
    r.outcome = ClientOutcome::kLeaderHint;
  } else {
    throw CodecError("unknown outcome " + name);
  }
  std::size_t expected = 2;
  if (auto v = j.find("value"); v != j.end()) {
    if (!v->is_string() || r.outcome != ClientOutcome::kOk) throw CodecError("misplaced value");
    r.value = v->get<std::string>();
    ++expected;
  }
  if (auto l = j.find("leader"); l != j.end()) {
    if (!l->is_number_integer() || r.outcome != ClientOutcome::kLeaderHint)
      throw CodecError("misplaced leader");
    r.leader = PeerId{l->get<std::int64_t>()};
    if (!r.leader->valid()) throw CodecError("leader out of range");
    ++expected;
  }
  if (r.outcome == ClientOutcome::kLeaderHint && !r.leader) throw CodecError("leader_hint without leader");
  if (j.size() != expected) throw CodecError("unknown fields in client response");
  return r;
}

}  // namespace mpaxos
