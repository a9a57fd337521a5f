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

#include "mpaxos/codec.hpp"

#include <initializer_list>

namespace mpaxos {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw CodecError(std::string("missing field '") + name + "'");
  return *it;
}

std::int64_t int_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_number_integer()) throw CodecError(std::string("field '") + name + "' not an integer");
  return v.get<std::int64_t>();
}

std::uint64_t uint_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_number_unsigned()) throw CodecError(std::string("field '") + name + "' not unsigned");
  return v.get<std::uint64_t>();
}

std::string string_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_string()) throw CodecError(std::string("field '") + name + "' not a string");
  return v.get<std::string>();
}

void expect_object(const json& j, const char* what) {
  if (!j.is_object()) throw CodecError(std::string(what) + " is not an object");
}

// Rejects unknown or misplaced fields so the ok/reject shapes stay exclusive.
void expect_only(const json& obj, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* name : allowed) known = known || it.key() == name;
    if (!known) throw CodecError("unexpected field '" + it.key() + "'");
  }
}

ResponseType response_type(const json& obj) {
  auto type = parse_response_type(string_field(obj, "type"));
  if (!type) throw CodecError("bad response type");
  return *type;
}

PeerId sender(const json& obj) {
  PeerId id{int_field(obj, "sender")};
  if (!id.valid()) throw CodecError("sender out of range");
  return id;
}

Ballot ballot(const json& obj) {
  Ballot b{int_field(obj, "ballot")};
  if (b.value < 0) throw CodecError("negative ballot");
  return b;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json payload_of(const Message& message) {
  return std::visit(
      Overloaded{
          [](const PrepareRequest& m) {
            return json{{"ballot", m.ballot.value}, {"sender", m.sender.value}};
          },
          [](const PrepareResponse& m) {
            json j{{"type", to_string(m.type)}};
            if (m.type == ResponseType::kOk) {
              json list = json::array();
              for (const auto& instance : m.instances) list.push_back(instance_to_json(instance));
              j["instances"] = std::move(list);
            } else {
              j["ballot"] = m.ballot.value;
            }
            return j;
          },
          [](const AcceptRequest& m) {
            return json{{"instance", instance_to_json(m.instance)}, {"sender", m.sender.value}};
          },
          [](const AcceptResponse& m) {
            json j{{"type", to_string(m.type)}};
            if (m.type == ResponseType::kReject) j["ballot"] = m.ballot.value;
            return j;
          },
          [](const CommitRequest& m) {
            return json{{"ballot", m.ballot.value},
                        {"last_executed", m.last_executed},
                        {"global_last_executed", m.global_last_executed},
                        {"sender", m.sender.value}};
          },
          [](const CommitResponse& m) {
            json j{{"type", to_string(m.type)}, {"last_executed", m.last_executed}};
            if (m.type == ResponseType::kReject) j["ballot"] = m.ballot.value;
            return j;
          },
      },
      message);
}

Message message_of(std::string_view type, const json& p) {
  expect_object(p, "payload");
  if (type == "prepare_request") {
    expect_only(p, {"ballot", "sender"});
    return PrepareRequest{ballot(p), sender(p)};
  }
  if (type == "prepare_response") {
    if (response_type(p) == ResponseType::kReject) {
      expect_only(p, {"type", "ballot"});
      return PrepareResponse::reject(ballot(p));
    }
    expect_only(p, {"type", "instances"});
    const json& list = field(p, "instances");
    if (!list.is_array()) throw CodecError("instances is not an array");
    std::vector<Instance> instances;
    instances.reserve(list.size());
    for (const auto& item : list) instances.push_back(instance_from_json(item));
    return PrepareResponse::ok(std::move(instances));
  }
  if (type == "accept_request") {
    expect_only(p, {"instance", "sender"});
    return AcceptRequest{instance_from_json(field(p, "instance")), sender(p)};
  }
  if (type == "accept_response") {
    if (response_type(p) == ResponseType::kReject) {
      expect_only(p, {"type", "ballot"});
      return AcceptResponse::reject(ballot(p));
    }
    expect_only(p, {"type"});
    return AcceptResponse::ok();
  }
  if (type == "commit_request") {
    expect_only(p, {"ballot", "last_executed", "global_last_executed", "sender"});
    CommitRequest m{ballot(p), int_field(p, "last_executed"), int_field(p, "global_last_executed"),
                    sender(p)};
    if (m.last_executed < 0 || m.global_last_executed < 0) throw CodecError("negative cursor");
    return m;
  }
  if (type == "commit_response") {
    LogIndex le = int_field(p, "last_executed");
    if (le < 0) throw CodecError("negative cursor");
    if (response_type(p) == ResponseType::kReject) {
      expect_only(p, {"type", "ballot", "last_executed"});
      return CommitResponse::reject(ballot(p), le);
    }
    expect_only(p, {"type", "last_executed"});
    return CommitResponse::ok(le);
  }
  throw CodecError("unknown message type '" + std::string(type) + "'");
}

}  // namespace

json command_to_json(const Command& command) {
  json j{{"type", to_string(command.type)}, {"key", command.key}};
  if (command.type == CommandType::kPut) j["value"] = command.value;
  return j;
}

Command command_from_json(const json& j) {
  expect_object(j, "command");
  auto type = parse_command_type(string_field(j, "type"));
  if (!type) throw CodecError("bad command type");
  Command command{*type, string_field(j, "key"), {}};
  if (command.key.empty()) throw CodecError("empty key");
  if (*type == CommandType::kPut) {
    expect_only(j, {"type", "key", "value"});
    command.value = string_field(j, "value");
  } else {
    expect_only(j, {"type", "key"});
  }
  return command;
}

json instance_to_json(const Instance& instance) {
  return json{{"ballot", instance.ballot.value},
              {"index", instance.index},
              {"client_id", instance.client_id},
              {"state", to_string(instance.state)},
              {"command", command_to_json(instance.command)}};
}

Instance instance_from_json(const json& j) {
  expect_object(j, "instance");
  expect_only(j, {"ballot", "index", "client_id", "state", "command"});
  auto state = parse_instance_state(string_field(j, "state"));
  if (!state) throw CodecError("bad instance state");
  Instance instance{ballot(j), int_field(j, "index"), uint_field(j, "client_id"), *state,
                    command_from_json(field(j, "command"))};
  if (instance.index < 1) throw CodecError("instance index must be >= 1");
  return instance;
}

std::string encode(const Message& message) {
  json envelope{{"type", message_type_name(message)}, {"payload", payload_of(message)}};
  try {
    return envelope.dump();
  } catch (const json::type_error& e) {
    throw CodecError(std::string("cannot encode: ") + e.what());
  }
}

Message decode(std::string_view text) {
  json envelope;
  try {
    envelope = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CodecError(std::string("malformed json: ") + e.what());
  }
  expect_object(envelope, "envelope");
  expect_only(envelope, {"type", "payload"});
  try {
    return message_of(string_field(envelope, "type"), field(envelope, "payload"));
  } catch (const json::exception& e) {
    throw CodecError(std::string("bad payload: ") + e.what());
  }
}

std::string frame(std::string_view payload) {
  if (payload.size() > kMaxFrameSize) throw CodecError("frame too large");
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(kFrameHeaderSize + payload.size());
  out.push_back(static_cast<char>((n >> 24) & 0xff));
  out.push_back(static_cast<char>((n >> 16) & 0xff));
  out.push_back(static_cast<char>((n >> 8) & 0xff));
  out.push_back(static_cast<char>(n & 0xff));
  out.append(payload);
  return out;
}

std::uint32_t parse_frame_header(const char header[kFrameHeaderSize]) {
  auto b = [&](int i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(header[i])); };
  return (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
}

}  // namespace mpaxos
