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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mpaxos {

// The low byte of a ballot holds the id of the peer that minted it; the
// remaining bits are the round.
inline constexpr std::int64_t kIdBits = 0xff;
inline constexpr std::int64_t kRoundIncrement = kIdBits + 1;

// Ids are limited to 4 bits. The value 0xf is never a configured peer id, so a
// ballot whose low byte is 0xf names no leader.
inline constexpr std::int64_t kMaxNumPeers = 0xf;

struct PeerId {
  std::int64_t value = 0;

  constexpr bool valid() const { return value >= 0 && value < kMaxNumPeers; }
  friend constexpr auto operator<=>(PeerId, PeerId) = default;
};

inline constexpr PeerId kNoLeader{kMaxNumPeers};

struct Ballot {
  std::int64_t value = kMaxNumPeers;

  friend constexpr auto operator<=>(Ballot, Ballot) = default;
};

// Every peer boots with this ballot: round 0, no leader.
inline constexpr Ballot kInitialBallot{kMaxNumPeers};

constexpr PeerId extract_leader_id(Ballot ballot) {
  return PeerId{ballot.value & kIdBits};
}

constexpr bool is_leader(Ballot ballot, PeerId id) {
  return extract_leader_id(ballot) == id;
}

constexpr bool is_someone_else_leader(Ballot ballot, PeerId id) {
  const PeerId leader = extract_leader_id(ballot);
  return leader != id && leader.value < kMaxNumPeers;
}

// Bumps the round of |current| and stamps |id| into the low byte. The result
// is strictly greater than |current| and unique to |id|.
constexpr Ballot next_ballot(Ballot current, PeerId id) {
  return Ballot{((current.value + kRoundIncrement) & ~kIdBits) | id.value};
}

using LogIndex = std::int64_t;
using ClientId = std::uint64_t;

enum class CommandType : std::uint8_t { kGet, kPut, kDel };

// Keys and values are opaque byte strings; equality is bytewise.
struct Command {
  CommandType type = CommandType::kGet;
  std::string key;
  std::string value;

  static Command get(std::string key);
  static Command put(std::string key, std::string value);
  static Command del(std::string key);
  // A read of a reserved key; proposed by a new leader for log slots that no
  // quorum member knows about.
  static Command noop();

  bool operator==(const Command&) const = default;
};

enum class InstanceState : std::uint8_t { kInProgress, kCommitted, kExecuted };

struct Instance {
  Ballot ballot;
  LogIndex index = 0;
  ClientId client_id = 0;
  InstanceState state = InstanceState::kInProgress;
  Command command;

  bool operator==(const Instance&) const = default;
};

enum class ReplicateStatus : std::uint8_t { kOk, kRetry, kSomeoneElseLeader };

struct ReplicateOutcome {
  ReplicateStatus status = ReplicateStatus::kRetry;
  std::optional<PeerId> leader;  // set iff status == kSomeoneElseLeader

  static ReplicateOutcome ok() { return {ReplicateStatus::kOk, std::nullopt}; }
  static ReplicateOutcome retry() { return {ReplicateStatus::kRetry, std::nullopt}; }
  static ReplicateOutcome someone_else_leader(PeerId leader) {
    return {ReplicateStatus::kSomeoneElseLeader, leader};
  }

  bool operator==(const ReplicateOutcome&) const = default;
};

enum class ResponseType : std::uint8_t { kOk, kReject };

struct PrepareRequest {
  Ballot ballot;
  PeerId sender;
  bool operator==(const PrepareRequest&) const = default;
};

// ok carries the responder's instances; reject carries the responder's ballot.
struct PrepareResponse {
  ResponseType type = ResponseType::kReject;
  Ballot ballot;
  std::vector<Instance> instances;

  static PrepareResponse ok(std::vector<Instance> instances) {
    return {ResponseType::kOk, Ballot{}, std::move(instances)};
  }
  static PrepareResponse reject(Ballot ballot) { return {ResponseType::kReject, ballot, {}}; }

  bool operator==(const PrepareResponse&) const = default;
};

struct AcceptRequest {
  Instance instance;
  PeerId sender;
  bool operator==(const AcceptRequest&) const = default;
};

struct AcceptResponse {
  ResponseType type = ResponseType::kReject;
  Ballot ballot;

  static AcceptResponse ok() { return {ResponseType::kOk, Ballot{}}; }
  static AcceptResponse reject(Ballot ballot) { return {ResponseType::kReject, ballot}; }

  bool operator==(const AcceptResponse&) const = default;
};

struct CommitRequest {
  Ballot ballot;
  LogIndex last_executed = 0;
  LogIndex global_last_executed = 0;
  PeerId sender;
  bool operator==(const CommitRequest&) const = default;
};

// Both variants report the responder's last_executed; reject also carries the
// responder's ballot.
struct CommitResponse {
  ResponseType type = ResponseType::kReject;
  Ballot ballot;
  LogIndex last_executed = 0;

  static CommitResponse ok(LogIndex last_executed) {
    return {ResponseType::kOk, Ballot{}, last_executed};
  }
  static CommitResponse reject(Ballot ballot, LogIndex last_executed) {
    return {ResponseType::kReject, ballot, last_executed};
  }

  bool operator==(const CommitResponse&) const = default;
};

using Message = std::variant<PrepareRequest, PrepareResponse, AcceptRequest, AcceptResponse,
                             CommitRequest, CommitResponse>;

bool is_request(const Message& message);

// Wire name of the variant held by |message|, e.g. "accept_request".
std::string_view message_type_name(const Message& message);

// Checks the structural rules every message must satisfy (index >= 1,
// non-empty keys, normalized ok/reject payloads). Returns a description of the
// first broken rule.
std::optional<std::string> check_message(const Message& message);

std::string_view to_string(CommandType type);
std::string_view to_string(InstanceState state);
std::string_view to_string(ReplicateStatus status);
std::string_view to_string(ResponseType type);

std::optional<CommandType> parse_command_type(std::string_view text);
std::optional<InstanceState> parse_instance_state(std::string_view text);
std::optional<ResponseType> parse_response_type(std::string_view text);

}  // namespace mpaxos
