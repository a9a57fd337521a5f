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

#include "mpaxos/kvstore.hpp"

namespace mpaxos {

CommandResult KVStore::apply(const Command& command) {
  switch (command.type) {
    case CommandType::kGet: {
      auto it = table_.find(command.key);
      if (it == table_.end()) return {false, std::nullopt};
      return {true, it->second};
    }
    case CommandType::kPut:
      table_[command.key] = command.value;
      return {true, std::nullopt};
    case CommandType::kDel:
      return {table_.erase(command.key) > 0, std::nullopt};
  }
  return {false, std::nullopt};
}

}  // namespace mpaxos
