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

#include <map>
#include <optional>
#include <string>

#include "mpaxos/core.hpp"

namespace mpaxos {

struct CommandResult {
  bool ok = false;
  std::optional<std::string> value;  // only for a successful get

  bool operator==(const CommandResult&) const = default;
};

// Single-threaded by contract: only the log executor applies commands.
class KVStore {
 public:
  CommandResult apply(const Command& command);

  const std::map<std::string, std::string>& table() const { return table_; }
  bool operator==(const KVStore& other) const { return table_ == other.table_; }

 private:
  std::map<std::string, std::string> table_;
};

}  // namespace mpaxos
