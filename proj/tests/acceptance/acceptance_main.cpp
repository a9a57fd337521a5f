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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Thresholds are fixed here, not read from flags.

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "mpaxos/bench.hpp"
#include "mpaxos/codec.hpp"
#include "mpaxos/log.hpp"
#include "mpaxos/sim/agreement.hpp"
#include "mpaxos/sim/cluster.hpp"
#include "mpaxos/sim/scenario.hpp"
#include "../support/loopback.hpp"
#include "../support/message_generator.hpp"

namespace mpaxos {
namespace {

using namespace std::chrono_literals;
using sim::RunReport;
using sim::ScenarioEvent;
using sim::ScenarioScript;
using Action = ScenarioEvent::Action;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records the first failed expectation.
  void expect(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::int64_t to_ms(Duration d) { return std::chrono::duration_cast<std::chrono::milliseconds>(d).count(); }

Duration first_event(const ScenarioScript& s, Action action) {
  for (const auto& e : s.events)
    if (e.action == action) return e.at;
  throw std::logic_error("scenario has no such event");
}

// Peers the scenario's events did not name at |at|.
std::vector<PeerId> unnamed_peers(const ScenarioScript& s, const RunReport& r, Duration at) {
  std::set<std::int64_t> named;
  if (auto it = r.resolved_selectors.find(to_ms(at)); it != r.resolved_selectors.end())
    for (const auto& [selector, peer] : it->second) named.insert(peer);
  std::vector<PeerId> out;
  for (int p = 0; p < s.cluster_size; ++p)
    if (!named.count(p)) out.push_back(PeerId{p});
  return out;
}

Duration max_link_delay(const ScenarioScript& s) { return s.links.latency + s.links.jitter; }

// --- 1 ----------------------------------------------------------------------

Outcome safety_sweep() {
  Outcome o;
  int runs = 0;
  for (const char* name : {"leader_losing_quorum", "chained_churn", "compaction_disconnect", "random_faults"}) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      RunReport r = sim::run_scenario(sim::builtin_scenario(name, seed));
      ++runs;
      o.expect(r.ok(), std::string(name) + " seed " + std::to_string(seed) + ": " +
                           (r.ok() ? "" : r.invariant_violations.front()));
    }
  }
  if (o.pass) o.detail = std::to_string(runs) + " runs, no violations";
  return o;
}

// --- 2 ----------------------------------------------------------------------

Outcome ballot_algebra() {
  Outcome o;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000 && o.pass; ++i) {
    const Ballot current{static_cast<std::int64_t>(rng() >> 14)};
    const PeerId a{static_cast<std::int64_t>(rng() % kMaxNumPeers)};
    PeerId b{static_cast<std::int64_t>(rng() % kMaxNumPeers)};
    if (b == a) b.value = (b.value + 1) % kMaxNumPeers;
    const Ballot na = next_ballot(current, a);
    o.expect(na > current, "next_ballot not above current at case " + std::to_string(i));
    o.expect(extract_leader_id(na) == a, "id not preserved at case " + std::to_string(i));
    o.expect(is_leader(na, a) && !is_someone_else_leader(na, a), "leader checks disagree");
    const Ballot other{static_cast<std::int64_t>(rng() >> 14)};
    o.expect(next_ballot(other, b) != na, "ballots of distinct peers collide at case " + std::to_string(i));
  }
  if (o.pass) o.detail = "10000 cases";
  return o;
}

// --- 3 ----------------------------------------------------------------------

Instance slot(LogIndex index, std::int64_t ballot, Command command,
              InstanceState state = InstanceState::kInProgress) {
  return Instance{Ballot{ballot}, index, 0, state, std::move(command)};
}

Outcome log_suite() {
  Outcome o;
  int violations = 0;
  SafetyHandler count = [&](const std::string&) { ++violations; };

  {  // insert: empty slot, stale ballot, higher ballot, decided slot
    Slots s;
    o.expect(insert(s, slot(1, 258, Command::get("a")), count), "insert into empty slot");
    insert(s, slot(1, 257, Command::get("b")), count);
    o.expect(s.at(1).command == Command::get("a"), "lower ballot displaced a slot");
    insert(s, slot(1, 514, Command::get("c")), count);
    o.expect(s.at(1).command == Command::get("c") && s.at(1).ballot == Ballot{514},
             "higher ballot did not replace");
    s.at(1).state = InstanceState::kCommitted;
    insert(s, slot(1, 770, Command::get("c")), count);
    o.expect(s.at(1).ballot == Ballot{514} && s.at(1).state == InstanceState::kCommitted,
             "decided slot changed");
    o.expect(violations == 0, "benign inserts flagged");
  }
  {  // the three safety cases
    Slots s;
    insert(s, slot(1, 258, Command::get("a"), InstanceState::kCommitted), count);
    insert(s, slot(1, 514, Command::get("b")), count);
    insert(s, slot(2, 258, Command::get("a"), InstanceState::kExecuted), count);
    insert(s, slot(2, 258, Command::get("b")), count);
    insert(s, slot(3, 258, Command::get("a")), count);
    insert(s, slot(3, 258, Command::get("b")), count);
    o.expect(violations == 3, "expected 3 safety violations, saw " + std::to_string(violations));
    violations = 0;
  }
  {  // append below gle, append moves last_index, commit, execute
    KVStore kv;
    Log log(kv, count);
    for (LogIndex i = 1; i <= 101; ++i) {
      log.append(slot(i, 258, Command::put("k", std::to_string(i))));
      log.commit(i);
      log.try_execute();
    }
    log.trim_until(101);
    o.expect(log.global_last_executed() == 101 && log.size() == 0, "trim_until(101)");
    log.append(slot(100, 514, Command::get("x")));
    o.expect(!log.at(100), "append at or below gle stored a slot");
    log.append(slot(104, 258, Command::get("x")));
    o.expect(log.last_index() == 104, "append did not raise last_index");
    o.expect(log.instances().size() == 1, "instances() range");
  }
  {  // commit_until stops at the first gap
    KVStore kv;
    Log log(kv, count);
    for (LogIndex i = 1; i <= 100; ++i) {
      log.append(slot(i, 258, Command::put("k", std::to_string(i))));
      log.commit(i);
      log.try_execute();
    }
    for (LogIndex i : {101, 102, 104}) log.append(slot(i, 258, Command::get("k")));
    log.commit_until(104, Ballot{258});
    o.expect(log.at(101)->state == InstanceState::kCommitted && log.at(102)->state == InstanceState::kCommitted,
             "commit_until skipped 101/102");
    o.expect(log.at(104)->state == InstanceState::kInProgress, "commit_until crossed the gap at 103");
    while (log.try_execute()) {}
    o.expect(log.last_executed() == 102, "execution did not stop at 102");
    o.expect(!log.validate(), "log invariants broken");
  }
  {  // execute blocks until commit; stop releases it
    KVStore kv;
    Log log(kv, count);
    log.append(slot(1, 258, Command::put("k", "v")));
    auto pending = std::async(std::launch::async, [&] { return log.execute(); });
    o.expect(pending.wait_for(20ms) == std::future_status::timeout, "execute did not block");
    log.commit(1);
    o.expect(pending.wait_for(2s) == std::future_status::ready && pending.get(), "execute not woken");
    auto blocked = std::async(std::launch::async, [&] { return log.execute(); });
    log.stop();
    o.expect(blocked.wait_for(2s) == std::future_status::ready && !blocked.get(), "stop did not release");
  }
  o.expect(violations == 0, "unexpected safety violation");
  if (o.pass) o.detail = "insert, append, commit, commit_until gap, trim_until, execute";
  return o;
}

// --- 4 ----------------------------------------------------------------------

Outcome recovery_equivalence() {
  Outcome o;
  EngineConfig base;
  base.commit_interval = 50ms;
  base.rpc_timeout = 10ms;
  EngineConfig slow = base;
  slow.election_multiplier_lo = slow.election_multiplier_hi = 100;

  sim::Cluster cluster(5, base, 4);
  for (int p = 1; p < 5; ++p) cluster.configure(PeerId{p}, slow);
  // Peers 3 and 4 are down, so peer 0 needs both 1 and 2 for a quorum.
  cluster.crash(PeerId{3});
  cluster.crash(PeerId{4});
  // Round 2 has been seen by everyone, nobody leads it.
  for (int p = 0; p < 5; ++p) cluster.set_initial_ballot(PeerId{p}, Ballot{512 | kMaxNumPeers});

  const Command c1 = Command::put("a", "1"), c2 = Command::put("b", "2"), c4 = Command::put("d", "4");
  const Command x = Command::put("c", "x"), y = Command::put("c", "y"), c5 = Command::put("e", "5");
  // Peer 0 lacks slots 3 and 5.
  for (auto i : {slot(1, 256, c1), slot(2, 256, c2), slot(4, 256, c4)}) cluster.log(PeerId{0}).append(i);
  for (auto i : {slot(1, 256, c1), slot(2, 256, c2), slot(3, 257, x), slot(5, 257, c5)})
    cluster.log(PeerId{1}).append(i);
  for (auto i : {slot(1, 256, c1), slot(3, 514, y), slot(4, 256, c4)}) cluster.log(PeerId{2}).append(i);

  cluster.start();
  cluster.scheduler().run_until(2s);
  o.expect(cluster.leader() == PeerId{0}, "peer 0 did not become leader");
  o.expect(cluster.violations().empty(),
           cluster.violations().empty() ? "" : "violation: " + cluster.violations().front());

  const Log& leader_log = cluster.log(PeerId{0});
  const LogIndex gle = leader_log.global_last_executed();
  const LogIndex last = leader_log.last_index();
  o.expect(last == 5, "leader last_index " + std::to_string(last));
  for (LogIndex i = gle + 1; i <= last && o.pass; ++i) {
    auto reference = leader_log.at(i);
    o.expect(reference.has_value(), "leader missing slot " + std::to_string(i));
    if (!reference) break;
    for (int p = 1; p <= 2; ++p) {
      auto other = cluster.log(PeerId{p}).at(i);
      o.expect(other && other->command == reference->command,
               "peer " + std::to_string(p) + " differs at slot " + std::to_string(i));
    }
  }
  o.expect(leader_log.at(3) && leader_log.at(3)->command == y, "slot 3 not won by the higher ballot");
  o.expect(leader_log.at(5) && leader_log.at(5)->command == c5, "slot 5 not recovered");
  for (int p = 0; p <= 2; ++p)
    o.expect(cluster.log(PeerId{p}).last_executed() == 5, "peer " + std::to_string(p) + " did not execute 1-5");
  o.expect(sim::check_agreement(cluster).empty(), "agreement check failed");
  if (o.pass) o.detail = "slots 1-5 equal on live peers, slot 3 = ballot 514 value, gle " + std::to_string(gle);
  return o;
}

// --- 5 ----------------------------------------------------------------------

// Upper bound on untrimmed slots per peer. Clients keep at most one request
// each in flight, so commits arrive at no more than clients / (think + client
// round trip) per second. A slot is trimmed once every peer has executed it
// and the leader's next commit round reports that; allow two full commit
// rounds (interval plus a request/response exchange) plus one more delivery.
std::int64_t compaction_bound(const ScenarioScript& s) {
  const double think = std::chrono::duration<double>(s.workload.think).count();
  const double hop = std::chrono::duration<double>(s.workload.client_latency).count();
  const double link = std::chrono::duration<double>(max_link_delay(s)).count();
  const double ci = std::chrono::duration<double>(s.engine.commit_interval).count();
  const double rate = s.workload.clients / (think + 2 * hop);
  const double window = 2 * (ci + 2 * link) + 2 * link;
  return s.workload.clients + static_cast<std::int64_t>(std::ceil(rate * window));
}

Outcome compaction_common(std::uint64_t seed) {
  Outcome o;
  const ScenarioScript s = sim::builtin_scenario("compaction_common", seed);
  const RunReport r = sim::run_scenario(s);
  o.expect(r.ok(), r.ok() ? "" : r.invariant_violations.front());
  const std::int64_t bound = compaction_bound(s);
  std::int64_t worst = 0;
  for (const auto& sample : r.samples)
    for (auto len : sample.log_len) worst = std::max(worst, len);
  o.expect(worst <= bound, "log length " + std::to_string(worst) + " > bound " + std::to_string(bound));

  // The first round of a term can find nothing new executed; after that,
  // clients keep the log moving faster than the commit interval.
  int all_ok = 0;
  std::set<std::int64_t> terms_seen;
  for (const auto& round : r.commit_rounds) {
    const auto& info = round.info;
    const bool first_of_term = terms_seen.insert(info.ballot.value).second;
    if (info.num_oks != info.num_peers) continue;
    ++all_ok;
    o.expect(info.gle_after == std::max(info.gle_before, info.min_last_executed),
             "round at " + std::to_string(to_ms(info.at)) + "ms did not take the full minimum");
    if (!first_of_term)
      o.expect(info.gle_after > info.gle_before,
               "gle did not advance in the all-ok round at " + std::to_string(to_ms(info.at)) + "ms");
  }
  o.expect(all_ok > 100, "too few all-ok rounds: " + std::to_string(all_ok));
  if (o.pass)
    o.detail = "max log length " + std::to_string(worst) + " <= B=" + std::to_string(bound) + ", " +
               std::to_string(all_ok) + " all-ok rounds advanced gle";
  return o;
}

// --- 6 ----------------------------------------------------------------------

struct DisconnectRun {
  ScenarioScript script;
  RunReport report;
  Duration onset{}, heal{};
  LogIndex target = 0;  // leader's last_executed at heal
  std::vector<CommitRoundInfo> after_heal;
};

DisconnectRun run_disconnect(const std::string& name, std::uint64_t seed) {
  DisconnectRun d;
  d.script = sim::builtin_scenario(name, seed);
  d.report = sim::run_scenario(d.script);
  d.onset = first_event(d.script, Action::kIsolate);
  d.heal = first_event(d.script, Action::kHealAll);
  for (const auto& sample : d.report.samples)
    if (sample.at <= d.heal && sample.leader)
      d.target = sample.last_executed[static_cast<std::size_t>(sample.leader->value)];
  for (const auto& round : d.report.commit_rounds)
    if (round.info.at >= d.heal) d.after_heal.push_back(round.info);
  return d;
}

Outcome compaction_disconnect(std::uint64_t seed) {
  Outcome o;
  DisconnectRun fill = run_disconnect("compaction_disconnect", seed);
  DisconnectRun off = run_disconnect("compaction_disconnect_nofill", seed);

  for (DisconnectRun* d : {&fill, &off}) {
    const std::string tag = d->script.name + ": ";
    o.expect(d->report.ok(), tag + (d->report.ok() ? "" : d->report.invariant_violations.front()));
    // A reply already on the wire at onset can still land.
    const Duration settle = d->onset + 2 * max_link_delay(d->script);
    std::optional<LogIndex> frozen;
    int rounds = 0;
    for (const auto& round : d->report.commit_rounds) {
      const auto& info = round.info;
      if (info.at < settle || info.at >= d->heal) continue;
      ++rounds;
      if (!frozen) frozen = info.gle_after;
      o.expect(info.gle_after == *frozen && info.gle_before == *frozen,
               tag + "gle moved during the outage at " + std::to_string(to_ms(info.at)) + "ms");
    }
    o.expect(rounds > 10, tag + "too few rounds during the outage");
    for (const auto& sample : d->report.samples) {
      if (sample.at < settle || sample.at >= d->heal || !frozen) continue;
      for (auto g : sample.gle) o.expect(g <= *frozen, tag + "a peer trimmed past the frozen gle");
    }
  }

  // The first all-ok round after heal commits what the follower already
  // held; with gap fill off gle stops there. Resuming means moving past it.
  const int limit = fill.script.engine.gap_fill.stall_rounds + 5;
  std::optional<LogIndex> plateau;
  int resumed_after = -1, caught_up_after = -1;
  for (std::size_t k = 0; k < fill.after_heal.size(); ++k) {
    const auto& info = fill.after_heal[k];
    if (!plateau) {
      if (info.num_oks == info.num_peers) plateau = info.gle_after;
      continue;
    }
    if (resumed_after < 0 && info.gle_after > *plateau) resumed_after = static_cast<int>(k) + 1;
    if (info.gle_after >= fill.target) {
      caught_up_after = static_cast<int>(k) + 1;
      break;
    }
  }
  o.expect(resumed_after > 0 && resumed_after <= limit,
           "retransmit: gle resumed after " + std::to_string(resumed_after) + " rounds, limit " +
               std::to_string(limit));
  o.expect(caught_up_after > 0, "retransmit: gle never reached the leader's position at heal");

  // Off: once the slots the follower already held are committed, gle stays
  // put for the rest of the run.
  std::optional<LogIndex> stuck;
  for (const auto& info : off.after_heal) {
    if (!stuck) {
      if (info.num_oks == info.num_peers) stuck = info.gle_after;
      continue;
    }
    o.expect(info.gle_after == *stuck, "off: gle moved after heal at " + std::to_string(to_ms(info.at)) + "ms");
  }
  o.expect(stuck && *stuck < off.target, "off: gle caught up with the leader");
  o.expect(off.after_heal.size() > static_cast<std::size_t>(4 * limit), "off: run too short after heal");
  if (o.pass)
    o.detail = "frozen during outage; retransmit resumed after " + std::to_string(resumed_after) +
               " rounds (limit " + std::to_string(limit) + "), caught up after " +
               std::to_string(caught_up_after) + "; off stuck at " + std::to_string(*stuck) +
               " < " + std::to_string(off.target);
  return o;
}

// --- 7 ----------------------------------------------------------------------

Outcome leader_losing_quorum(std::uint64_t seed) {
  Outcome o;
  const ScenarioScript s = sim::builtin_scenario("leader_losing_quorum", seed);
  const RunReport r = sim::run_scenario(s);
  o.expect(r.ok(), r.ok() ? "" : r.invariant_violations.front());
  const Duration onset = s.events.front().at;
  const Duration heal = first_event(s, Action::kHealAll);
  const auto spare = unnamed_peers(s, r, onset);
  o.expect(spare.size() == 1, "expected one quorum-connected peer");
  if (!o.pass) return o;
  const PeerId e = spare.front();

  const Duration interval =
      Duration(static_cast<Duration::rep>(s.engine.commit_interval.count() * s.engine.election_multiplier_hi));
  // E can win, promise the cut-off leader's next ballot, and win again; the
  // leadership that counts is the one it holds from then on.
  std::optional<Duration> won;
  for (const auto& l : r.leader_timeline)
    if (l.at >= onset && l.at < heal && l.peer == e) won = l.at;
  o.expect(won && *won - onset <= 4 * interval,
           "peer " + std::to_string(e.value) + " not leader within " + std::to_string(to_ms(4 * interval)) + "ms");
  if (!o.pass) return o;
  for (const auto& election : r.election_log)
    o.expect(election.at <= *won, "election by peer " + std::to_string(election.peer.value) + " at " +
                                      std::to_string(to_ms(election.at)) + "ms after the new leader won");

  LogIndex at_win = -1, at_heal = -1, at_end = -1;
  for (const auto& sample : r.samples) {
    const LogIndex le = sample.last_executed[static_cast<std::size_t>(e.value)];
    if (sample.at <= *won) at_win = le;
    if (sample.at <= heal) at_heal = le;
    at_end = le;
  }
  o.expect(at_heal > at_win, "no commits between election and heal");
  o.expect(at_end > at_heal, "no commits after heal");
  if (o.pass)
    o.detail = "peer " + std::to_string(e.value) + " led " + std::to_string(to_ms(*won - onset)) +
               "ms after onset (limit " + std::to_string(to_ms(4 * interval)) + "ms), no later elections";
  return o;
}

// --- 8 ----------------------------------------------------------------------

Outcome churn_damping(std::uint64_t seed) {
  Outcome o;
  const ScenarioScript adaptive = sim::builtin_scenario("chained_churn", seed);
  const RunReport ra = sim::run_scenario(adaptive);
  o.expect(ra.ok(), ra.ok() ? "" : ra.invariant_violations.front());
  const Duration onset = adaptive.events.front().at;
  const Duration heal = first_event(adaptive, Action::kHealAll);
  const auto spare = unnamed_peers(adaptive, ra, onset);
  o.expect(spare.size() == 1, "expected one fully connected peer");
  if (!o.pass) return o;
  const PeerId f = spare.front();

  std::optional<sim::LeaderRecord> last;
  for (const auto& l : ra.leader_timeline)
    if (l.at < heal) last = l;
  o.expect(last && last->peer == f && last->at >= onset,
           "final leader before heal is not peer " + std::to_string(f.value));
  if (!o.pass) return o;
  for (const auto& election : ra.election_log)
    o.expect(election.at <= last->at || election.at >= heal,
             "election at " + std::to_string(to_ms(election.at)) + "ms before heal");

  const ScenarioScript classic = sim::builtin_scenario("chained_churn_classic", seed);
  const RunReport rc = sim::run_scenario(classic);
  o.expect(rc.ok(), rc.ok() ? "" : rc.invariant_violations.front());
  int changes = 0;
  for (const auto& l : rc.leader_timeline)
    if (l.at >= onset && l.at <= heal) ++changes;
  o.expect(changes >= 3, "classic: only " + std::to_string(changes) + " leadership changes");
  if (o.pass)
    o.detail = "adaptive: peer " + std::to_string(f.value) + " leads from " + std::to_string(to_ms(last->at)) +
               "ms; classic: " + std::to_string(changes) + " leadership changes in the window";
  return o;
}

// --- 9 ----------------------------------------------------------------------

Outcome wall_clock_smoke() {
  Outcome o;
  testing::LocalCluster cluster(3);
  cluster.start();
  auto leader = cluster.wait_for_leader(10s);
  o.expect(leader.has_value(), "no leader elected");
  if (!o.pass) return o;

  WorkloadSpec spec;
  spec.addrs = cluster.client_addrs;
  spec.clients = 8;
  spec.duration = 20s;
  spec.key_count = 10000;
  spec.value_len = 100;

  const auto t0 = std::chrono::steady_clock::now();
  auto bench = std::async(std::launch::async, [&] { return run_workload(spec); });
  std::this_thread::sleep_until(t0 + 10s);
  const PeerId victim{*cluster.leader()};
  const auto kill_start = std::chrono::steady_clock::now();
  cluster.nodes[static_cast<std::size_t>(victim.value)]->stop();
  const auto kill_done = std::chrono::steady_clock::now();
  const BenchReport report = bench.get();
  for (auto& n : cluster.nodes) n->stop();

  o.expect(!report.aborted, "bench aborted");
  o.expect(report.throughput_ops > 500, "throughput " + std::to_string(report.throughput_ops) + " op/s");
  o.expect(report.latency_p99_ms < 100, "p99 " + std::to_string(report.latency_p99_ms) + " ms");

  // Buckets are counted from the bench's own start, which is at or after t0.
  // The first bucket starting once stop() returned only holds requests that
  // the surviving peers served.
  const double bucket_s = std::chrono::duration<double>(report.bucket).count();
  const double kill_at = std::chrono::duration<double>(kill_start - t0).count();
  const double stopped_at = std::chrono::duration<double>(kill_done - t0).count();
  std::optional<double> recovered;
  for (std::size_t i = static_cast<std::size_t>(std::ceil(stopped_at / bucket_s)); i < report.timeline.size(); ++i)
    if (report.timeline[i] > 0) {
      recovered = (static_cast<double>(i) + 1) * bucket_s - kill_at;
      break;
    }
  o.expect(recovered && *recovered <= 3.0,
           recovered ? "recovery took " + std::to_string(*recovered) + " s" : "no throughput after the kill");
  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.0f op/s, p99 %.2f ms, recovered within %.1f s of killing peer %lld",
                  report.throughput_ops, report.latency_p99_ms, *recovered,
                  static_cast<long long>(victim.value));
    o.detail = buf;
  }
  return o;
}

// --- 10 ---------------------------------------------------------------------

Outcome wire_round_trip() {
  Outcome o;
  testing::MessageGenerator gen(10);
  std::set<std::string> kinds;
  for (int i = 0; i < 10000 && o.pass; ++i) {
    const Message m = gen.message();
    kinds.insert(std::string(message_type_name(m)));
    const std::string wire = encode(m);
    try {
      o.expect(decode(wire) == m, "round trip changed " + wire);
    } catch (const CodecError& e) {
      o.expect(false, std::string("decode failed: ") + e.what());
    }
  }
  o.expect(kinds.size() == 6, "not every variant generated");

  auto rejected = [](const std::string& text) {
    try {
      decode(text);
      return false;
    } catch (const CodecError&) {
      return true;
    }
  };
  o.expect(rejected(R"({"payload":{"ballot":3,"type":"ok"},"type":"accept_response"})"), "ok with ballot accepted");
  o.expect(rejected(R"({"payload":{"type":"reject"},"type":"accept_response"})"), "reject without ballot accepted");
  o.expect(rejected(R"({"payload":{"ballot":3,"instances":[],"type":"reject"},"type":"prepare_response"})"),
           "reject with instances accepted");
  o.expect(rejected(R"({"payload":{"type":"ok"},"type":"prepare_response"})"), "ok without instances accepted");
  o.expect(rejected(R"({"payload":{"ballot":3,"last_executed":1,"type":"ok"},"type":"commit_response"})"),
           "commit ok with ballot accepted");
  o.expect(rejected(R"({"payload":{"last_executed":1,"type":"reject"},"type":"commit_response"})"),
           "commit reject without ballot accepted");
  if (o.pass) o.detail = "10000 messages, 6 variants, presence rules enforced";
  return o;
}

// Pass/fail comes from the pinned seed. The same check over other seeds is
// reported alongside, since timing-driven outcomes vary with the seed.
std::function<Outcome()> pinned_with_survey(std::function<Outcome(std::uint64_t)> check) {
  return [check] {
    constexpr std::uint64_t kPinned = 1, kSurvey = 100;
    Outcome o = check(kPinned);
    int ok = 0;
    std::string first_bad;
    for (std::uint64_t seed = 1; seed <= kSurvey; ++seed) {
      Outcome other = check(seed);
      ok += other.pass;
      if (!other.pass && first_bad.empty()) first_bad = " (first miss: seed " + std::to_string(seed) + ", " + other.detail + ")";
    }
    o.detail += "; seeds 1-" + std::to_string(kSurvey) + ": " + std::to_string(ok) + " hold" + first_bad;
    return o;
  };
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
  double limit_s;  // 0: no time limit
};

}  // namespace
}  // namespace mpaxos

int main(int argc, char** argv) {
  using namespace mpaxos;
  spdlog::set_level(spdlog::level::err);
  const std::vector<Criterion> criteria = {
      {1, "safety sweep", safety_sweep, 60},
      {2, "ballot algebra", ballot_algebra, 1},
      {3, "log unit suite", log_suite, 1},
      {4, "recovery equivalence", recovery_equivalence, 5},
      {5, "compaction common path", pinned_with_survey(compaction_common), 0},
      {6, "compaction under disconnection", pinned_with_survey(compaction_disconnect), 10},
      {7, "leader losing quorum", pinned_with_survey(leader_losing_quorum), 10},
      {8, "churn damping", pinned_with_survey(churn_damping), 10},
      {9, "wall-clock smoke", wall_clock_smoke, 0},
      {10, "wire round-trip", wire_round_trip, 1},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail = "took longer than " + std::to_string(c.limit_s) + " s";
    }
    failed += !o.pass;
    std::printf("criterion %2d %s  %s: %s (%.2fs)\n", c.number, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
