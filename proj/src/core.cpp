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

#include "mpaxos/core.hpp"

#include <type_traits>

namespace mpaxos {

namespace {

constexpr std::string_view kNoopKey = "__noop__";

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::optional<std::string> check_instance(const Instance& instance) {
  if (instance.index < 1) return "instance index must be >= 1";
  if (instance.ballot.value < 0) return "instance ballot must be non-negative";
  if (instance.command.key.empty()) return "command key must be non-empty";
  if (instance.command.type != CommandType::kPut && !instance.command.value.empty())
    return "only put commands carry a value";
  return std::nullopt;
}

}  // namespace

Command Command::get(std::string key) { return {CommandType::kGet, std::move(key), {}}; }

Command Command::put(std::string key, std::string value) {
  return {CommandType::kPut, std::move(key), std::move(value)};
}

Command Command::del(std::string key) { return {CommandType::kDel, std::move(key), {}}; }

Command Command::noop() { return get(std::string(kNoopKey)); }

bool is_request(const Message& message) {
  return std::holds_alternative<PrepareRequest>(message) ||
         std::holds_alternative<AcceptRequest>(message) ||
         std::holds_alternative<CommitRequest>(message);
}

std::string_view message_type_name(const Message& message) {
  return std::visit(Overloaded{
                        [](const PrepareRequest&) { return std::string_view("prepare_request"); },
                        [](const PrepareResponse&) { return std::string_view("prepare_response"); },
                        [](const AcceptRequest&) { return std::string_view("accept_request"); },
                        [](const AcceptResponse&) { return std::string_view("accept_response"); },
                        [](const CommitRequest&) { return std::string_view("commit_request"); },
                        [](const CommitResponse&) { return std::string_view("commit_response"); },
                    },
                    message);
}

std::optional<std::string> check_message(const Message& message) {
  return std::visit(
      Overloaded{
          [](const PrepareRequest& m) -> std::optional<std::string> {
            if (!m.sender.valid()) return "sender out of range";
            if (m.ballot.value < 0) return "negative ballot";
            return std::nullopt;
          },
          [](const PrepareResponse& m) -> std::optional<std::string> {
            if (m.type == ResponseType::kReject) {
              if (!m.instances.empty()) return "reject must not carry instances";
              if (m.ballot.value < 0) return "negative ballot";
              return std::nullopt;
            }
            if (m.ballot != Ballot{}) return "ok must not carry a ballot";
            for (const auto& instance : m.instances)
              if (auto err = check_instance(instance)) return err;
            return std::nullopt;
          },
          [](const AcceptRequest& m) -> std::optional<std::string> {
            if (!m.sender.valid()) return "sender out of range";
            return check_instance(m.instance);
          },
          [](const AcceptResponse& m) -> std::optional<std::string> {
            if (m.type == ResponseType::kOk && m.ballot != Ballot{}) return "ok must not carry a ballot";
            if (m.type == ResponseType::kReject && m.ballot.value < 0) return "negative ballot";
            return std::nullopt;
          },
          [](const CommitRequest& m) -> std::optional<std::string> {
            if (!m.sender.valid()) return "sender out of range";
            if (m.ballot.value < 0) return "negative ballot";
            if (m.last_executed < 0 || m.global_last_executed < 0) return "negative cursor";
            return std::nullopt;
          },
          [](const CommitResponse& m) -> std::optional<std::string> {
            if (m.last_executed < 0) return "negative cursor";
            if (m.type == ResponseType::kOk && m.ballot != Ballot{}) return "ok must not carry a ballot";
            if (m.type == ResponseType::kReject && m.ballot.value < 0) return "negative ballot";
            return std::nullopt;
          },
      },
      message);
}

std::string_view to_string(CommandType type) {
  switch (type) {
    case CommandType::kGet: return "get";
    case CommandType::kPut: return "put";
    case CommandType::kDel: return "del";
  }
  return "?";
}

std::string_view to_string(InstanceState state) {
  switch (state) {
    case InstanceState::kInProgress: return "in_progress";
    case InstanceState::kCommitted: return "committed";
    case InstanceState::kExecuted: return "executed";
  }
  return "?";
}

std::string_view to_string(ReplicateStatus status) {
  switch (status) {
    case ReplicateStatus::kOk: return "ok";
    case ReplicateStatus::kRetry: return "retry";
    case ReplicateStatus::kSomeoneElseLeader: return "someone_else_leader";
  }
  return "?";
}

std::string_view to_string(ResponseType type) {
  return type == ResponseType::kOk ? "ok" : "reject";
}

std::optional<CommandType> parse_command_type(std::string_view text) {
  if (text == "get") return CommandType::kGet;
  if (text == "put") return CommandType::kPut;
  if (text == "del") return CommandType::kDel;
  return std::nullopt;
}

std::optional<InstanceState> parse_instance_state(std::string_view text) {
  if (text == "in_progress") return InstanceState::kInProgress;
  if (text == "committed") return InstanceState::kCommitted;
  if (text == "executed") return InstanceState::kExecuted;
  return std::nullopt;
}

std::optional<ResponseType> parse_response_type(std::string_view text) {
  if (text == "ok") return ResponseType::kOk;
  if (text == "reject") return ResponseType::kReject;
  return std::nullopt;
}

}  // namespace mpaxos
