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

#include "mpaxos/sim/agreement.hpp"

namespace mpaxos::sim {

std::vector<std::string> check_agreement(const std::vector<std::vector<ExecutedEntry>>& histories,
                                         const std::vector<const KVStore*>& stores) {
  std::vector<std::string> out;
  std::size_t longest = 0;
  for (std::size_t p = 0; p < histories.size(); ++p) {
    const auto& h = histories[p];
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].index != static_cast<LogIndex>(i) + 1) {
        out.push_back("peer " + std::to_string(p) + " history is not contiguous at position " +
                      std::to_string(i));
        break;
      }
    }
    if (h.size() > histories[longest].size()) longest = p;
  }

  const auto& reference = histories.empty() ? std::vector<ExecutedEntry>{} : histories[longest];
  for (std::size_t p = 0; p < histories.size(); ++p) {
    const auto& h = histories[p];
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].command != reference[i].command) {
        out.push_back("peers " + std::to_string(p) + " and " + std::to_string(longest) +
                      " executed different commands at index " + std::to_string(i + 1));
        break;
      }
    }
  }

  for (std::size_t p = 0; p < stores.size() && p < histories.size(); ++p) {
    if (!stores[p]) continue;
    KVStore replayed;
    for (const auto& e : histories[p]) replayed.apply(e.command);
    if (!(replayed == *stores[p]))
      out.push_back("peer " + std::to_string(p) + " state machine differs from its history");
  }
  return out;
}

std::vector<std::string> check_agreement(Cluster& cluster) {
  std::vector<const KVStore*> stores;
  for (int p = 0; p < cluster.size(); ++p) stores.push_back(&cluster.kv(PeerId{p}));
  return check_agreement(cluster.executed(), stores);
}

}  // namespace mpaxos::sim
