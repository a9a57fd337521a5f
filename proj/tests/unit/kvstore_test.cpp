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

#include <gtest/gtest.h>

#include <random>

#include "mpaxos/kvstore.hpp"

namespace mpaxos {
namespace {

TEST(KVStore, ReadYourWrite) {
  KVStore kv;
  EXPECT_EQ(kv.apply(Command::put("k", "v")), (CommandResult{true, std::nullopt}));
  EXPECT_EQ(kv.apply(Command::get("k")), (CommandResult{true, "v"}));
}

TEST(KVStore, MissingKey) {
  KVStore kv;
  EXPECT_EQ(kv.apply(Command::get("absent")), (CommandResult{false, std::nullopt}));
  EXPECT_EQ(kv.apply(Command::del("absent")), (CommandResult{false, std::nullopt}));
}

TEST(KVStore, LastWriterWins) {
  KVStore kv;
  kv.apply(Command::put("k", "v1"));
  kv.apply(Command::put("k", "v2"));
  EXPECT_EQ(kv.apply(Command::get("k")).value, "v2");
  EXPECT_TRUE(kv.apply(Command::del("k")).ok);
  EXPECT_FALSE(kv.apply(Command::get("k")).ok);
}

TEST(KVStore, SameSequenceSameState) {
  std::mt19937_64 rng(3);
  std::vector<Command> commands;
  for (int i = 0; i < 5000; ++i) {
    const std::string key = "k" + std::to_string(rng() % 50);
    switch (rng() % 3) {
      case 0: commands.push_back(Command::get(key)); break;
      case 1: commands.push_back(Command::put(key, std::to_string(rng()))); break;
      default: commands.push_back(Command::del(key)); break;
    }
  }
  KVStore a, b;
  for (const auto& c : commands) EXPECT_EQ(a.apply(c), b.apply(c));
  EXPECT_TRUE(a == b);
  EXPECT_EQ(a.table(), b.table());
}

}  // namespace
}  // namespace mpaxos
