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

#include <atomic>
#include <thread>

#include "mpaxos/client_protocol.hpp"
#include "mpaxos/codec.hpp"
#include "mpaxos/net/socket.hpp"
#include "mpaxos/net/transport.hpp"
#include "mpaxos/node.hpp"
#include "../support/loopback.hpp"

namespace mpaxos {
namespace {

using namespace std::chrono_literals;
using testing::client_call;
using testing::free_port;
using testing::LocalCluster;

TEST(ClientProtocol, RoundTrips) {
  ClientRequest req{7, Command::put("k", "v")};
  EXPECT_EQ(decode_client_request(encode_client_request(req)), req);
  for (const ClientResponse& r :
       {ClientResponse{1, ClientOutcome::kOk, "v", std::nullopt},
        ClientResponse{2, ClientOutcome::kOk, std::nullopt, std::nullopt},
        ClientResponse{3, ClientOutcome::kRetry, std::nullopt, std::nullopt},
        ClientResponse{4, ClientOutcome::kLeaderHint, std::nullopt, PeerId{2}}})
    EXPECT_EQ(decode_client_response(encode_client_response(r)), r);
}

TEST(ClientProtocol, RejectsMalformed) {
  EXPECT_THROW(decode_client_request("{}"), CodecError);
  EXPECT_THROW(decode_client_request(R"({"request_id":1,"command":{"type":"get","key":""}})"),
               CodecError);
  EXPECT_THROW(decode_client_response(R"({"request_id":1,"outcome":"leader_hint"})"), CodecError);
  EXPECT_THROW(decode_client_response(R"({"request_id":1,"outcome":"retry","value":"x"})"),
               CodecError);
}

TEST(Socket, FramesOverLoopback) {
  auto listener = net::listen_on("127.0.0.1", 0);
  const auto port = net::local_port(listener);
  std::thread server([&] {
    auto conn = net::accept_from(listener, net::Clock::now() + 5s);
    ASSERT_TRUE(conn);
    auto frame = net::read_frame(*conn, net::Clock::now() + 5s);
    ASSERT_TRUE(frame);
    net::write_frame(*conn, "echo:" + *frame, net::Clock::now() + 5s);
  });
  auto client = net::connect_to({"127.0.0.1", port}, net::Clock::now() + 5s);
  ASSERT_TRUE(net::write_frame(client, "hi", net::Clock::now() + 5s));
  EXPECT_EQ(net::read_frame(client, net::Clock::now() + 5s), "echo:hi");
  server.join();
  EXPECT_FALSE(net::read_frame(client, net::Clock::now() + 1s));
  EXPECT_TRUE(net::peer_closed(client));
}

TEST(Socket, ReadTimesOut) {
  auto listener = net::listen_on("127.0.0.1", 0);
  auto client = net::connect_to({"127.0.0.1", net::local_port(listener)}, net::Clock::now() + 5s);
  auto conn = net::accept_from(listener, net::Clock::now() + 5s);
  const auto start = net::Clock::now();
  EXPECT_FALSE(net::read_frame(client, start + 100ms));
  EXPECT_GE(net::Clock::now() - start, 90ms);
}

TEST(Socket, ConnectRefused) {
  const auto port = free_port();
  EXPECT_THROW(net::connect_to({"127.0.0.1", port}, net::Clock::now() + 1s), net::NetError);
}

TEST(PeerTransport, CallAndReuse) {
  net::PeerServer server;
  std::atomic<int> handled{0};
  server.start("127.0.0.1", 0, [&](const Message& m) -> Message {
    ++handled;
    return PrepareResponse::reject(std::get<PrepareRequest>(m).ballot);
  });
  net::PeerClient client({"127.0.0.1:1", "127.0.0.1:" + std::to_string(server.port())});
  for (int i = 0; i < 50; ++i) {
    auto reply = client.call(PeerId{1}, PrepareRequest{Ballot{258 + i}, PeerId{0}}, 2000ms);
    ASSERT_TRUE(reply);
    EXPECT_EQ(*reply, Message(PrepareResponse::reject(Ballot{258 + i})));
  }
  EXPECT_EQ(handled, 50);
  // Nothing listens on peer 0's address.
  EXPECT_FALSE(client.call(PeerId{0}, PrepareRequest{Ballot{1}, PeerId{1}}, 200ms));
  server.stop();
  EXPECT_FALSE(client.call(PeerId{1}, PrepareRequest{Ballot{1}, PeerId{0}}, 200ms));
}

TEST(PeerTransport, SlowHandlerTimesOut) {
  net::PeerServer server;
  server.start("127.0.0.1", 0, [](const Message&) -> Message {
    std::this_thread::sleep_for(300ms);
    return AcceptResponse::ok();
  });
  net::PeerClient client({"127.0.0.1:" + std::to_string(server.port())});
  EXPECT_FALSE(client.call(PeerId{0}, PrepareRequest{Ballot{1}, PeerId{0}}, 50ms));
  // The late reply must not be read as the answer to the next call.
  std::this_thread::sleep_for(400ms);
  auto reply = client.call(PeerId{0}, PrepareRequest{Ballot{1}, PeerId{0}}, 1000ms);
  ASSERT_TRUE(reply);
  EXPECT_EQ(*reply, Message(AcceptResponse::ok()));
  server.stop();
}

TEST(Node, RejectsBadConfig) {
  NodeConfig c;
  c.peers = {"127.0.0.1:1"};
  c.id = PeerId{1};
  EXPECT_THROW(Node{c}, NodeError);
}

TEST(Node, BindFailureIsReported) {
  auto taken = net::listen_on("127.0.0.1", 0);
  NodeConfig c;
  c.peers = {"127.0.0.1:" + std::to_string(net::local_port(taken))};
  c.client_port = free_port();
  Node node(c);
  EXPECT_THROW(node.start(), NodeError);
  EXPECT_FALSE(node.running());
}

TEST(Node, RepeatedStartStop) {
  NodeConfig c;
  c.peers = {"127.0.0.1:" + std::to_string(free_port())};
  c.client_port = free_port();
  c.commit_interval_ms = 20;
  Node node(c);
  const std::string addr = "127.0.0.1:" + std::to_string(c.client_port);
  for (int i = 0; i < 20; ++i) {
    node.start();
    ASSERT_TRUE(node.running());
    std::optional<ClientResponse> r;
    for (int attempt = 0; attempt < 100 && (!r || r->outcome != ClientOutcome::kOk); ++attempt) {
      r = client_call(addr, ClientRequest{1, Command::put("k", std::to_string(i))}, 1000ms);
      if (!r || r->outcome != ClientOutcome::kOk) std::this_thread::sleep_for(10ms);
    }
    ASSERT_TRUE(r && r->outcome == ClientOutcome::kOk) << "iteration " << i;
    node.stop();
    EXPECT_FALSE(node.running());
  }
}

TEST(Node, ThreeReplicasOverLoopback) {
  LocalCluster cluster(3, 50, 50);
  cluster.start();
  auto leader = cluster.wait_for_leader(5000ms);
  ASSERT_TRUE(leader);

  auto put = client_call(cluster.client_addrs[*leader], {1, Command::put("color", "blue")}, 2000ms);
  ASSERT_TRUE(put);
  EXPECT_EQ(put->outcome, ClientOutcome::kOk);
  EXPECT_EQ(put->request_id, 1u);
  auto get = client_call(cluster.client_addrs[*leader], {2, Command::get("color")}, 2000ms);
  ASSERT_TRUE(get);
  EXPECT_EQ(get->outcome, ClientOutcome::kOk);
  EXPECT_EQ(get->value, "blue");

  const int follower = (*leader + 1) % 3;
  auto hint = client_call(cluster.client_addrs[follower], {3, Command::get("color")}, 2000ms);
  ASSERT_TRUE(hint);
  EXPECT_EQ(hint->outcome, ClientOutcome::kLeaderHint);
  EXPECT_EQ(hint->leader, PeerId{*leader});

  // Losing the leader: the other two elect a new one and keep the data.
  cluster.nodes[*leader]->stop();
  std::optional<int> next;
  const auto until = std::chrono::steady_clock::now() + 5s;
  while (std::chrono::steady_clock::now() < until && !next) {
    next = cluster.leader();
    std::this_thread::sleep_for(10ms);
  }
  ASSERT_TRUE(next);
  std::optional<ClientResponse> again;
  for (int attempt = 0; attempt < 100 && (!again || again->outcome != ClientOutcome::kOk); ++attempt) {
    again = client_call(cluster.client_addrs[*next], {4, Command::get("color")}, 1000ms);
    if (!again || again->outcome != ClientOutcome::kOk) std::this_thread::sleep_for(20ms);
  }
  ASSERT_TRUE(again);
  EXPECT_EQ(again->value, "blue");
  for (auto& n : cluster.nodes) n->stop();
}

}  // namespace
}  // namespace mpaxos
