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

#include <string>
#include <vector>

#include "mpaxos/kvstore.hpp"
#include "mpaxos/sim/cluster.hpp"

namespace mpaxos::sim {

// Cross-peer safety check over what each peer executed:
//  - each history is the contiguous sequence 1, 2, 3, ...;
//  - histories agree command-for-command wherever they overlap, so each one
//    is a prefix of the longest;
//  - each state machine equals a fresh store fed that peer's prefix.
std::vector<std::string> check_agreement(const std::vector<std::vector<ExecutedEntry>>& histories,
                                         const std::vector<const KVStore*>& stores);

std::vector<std::string> check_agreement(Cluster& cluster);

}  // namespace mpaxos::sim
