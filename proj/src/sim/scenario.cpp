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

#include "mpaxos/sim/scenario.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>

#include "mpaxos/sim/agreement.hpp"
#include "mpaxos/zipfian.hpp"

namespace mpaxos::sim {

using nlohmann::json;
using std::chrono::milliseconds;

namespace {

std::int64_t ms(Duration d) { return std::chrono::duration_cast<milliseconds>(d).count(); }

std::string_view action_name(ScenarioEvent::Action a) {
  switch (a) {
    case ScenarioEvent::Action::kSetLink: return "set_link";
    case ScenarioEvent::Action::kIsolate: return "isolate";
    case ScenarioEvent::Action::kCrash: return "crash";
    case ScenarioEvent::Action::kRestart: return "restart";
    case ScenarioEvent::Action::kHealAll: return "heal_all";
  }
  return "?";
}

ScenarioEvent::Action parse_action(const std::string& s) {
  if (s == "set_link") return ScenarioEvent::Action::kSetLink;
  if (s == "isolate") return ScenarioEvent::Action::kIsolate;
  if (s == "crash") return ScenarioEvent::Action::kCrash;
  if (s == "restart") return ScenarioEvent::Action::kRestart;
  if (s == "heal_all") return ScenarioEvent::Action::kHealAll;
  throw std::invalid_argument("unknown scenario action: " + s);
}

bool valid_selector(const std::string& s, int n) {
  if (s == "leader") return true;
  auto digits = [](std::string_view v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (s.rfind("follower", 0) == 0) {
    std::string_view rest(s);
    rest.remove_prefix(8);
    return digits(rest) && std::stoi(std::string(rest)) < n - 1;
  }
  return digits(s) && std::stoi(s) < n;
}

// Peer assignment for one event instant.
class Selectors {
 public:
  Selectors(Cluster& cluster) {
    const int n = cluster.size();
    // Without a leader, peer 0 stands in so scripts stay well-defined.
    leader_ = cluster.leader().value_or(PeerId{0}).value;
    for (int p = 0; p < n; ++p)
      if (p != leader_) followers_.push_back(p);
  }

  std::int64_t resolve(const std::string& s) const {
    if (s == "leader") return leader_;
    if (s.rfind("follower", 0) == 0)
      return followers_.at(static_cast<std::size_t>(std::stoi(s.substr(8))));
    return std::stoll(s);
  }

 private:
  std::int64_t leader_ = 0;
  std::vector<std::int64_t> followers_;
};

class Runner {
 public:
  explicit Runner(const ScenarioScript& script)
      : script_(script),
        cluster_(script.cluster_size, engine_base(script), script.seed, script.links),
        zipf_(static_cast<std::uint64_t>(script.workload.key_count), script.workload.zipf_theta) {}

  RunReport run() {
    Scheduler& sched = cluster_.scheduler();
    cluster_.start();

    schedule_events();
    for (int c = 0; c < script_.workload.clients; ++c) {
      clients_.push_back(Client{});
      clients_.back().target = c % script_.cluster_size;
      sched.after(Duration::zero(), [this, c] { issue(c); });
    }
    const Duration period = script_.sample_interval.value_or(script_.engine.commit_interval);
    for (Duration t = period; t <= script_.duration; t += period)
      sched.at(t, [this] { sample(); });

    sched.run_until(script_.duration);
    finish();
    return std::move(report_);
  }

 private:
  struct Client {
    int target = 0;
    std::uint64_t request = 0;  // id of the outstanding request, 0 if none
    Duration sent{};
  };

  static EngineConfig engine_base(const ScenarioScript& script) {
    EngineConfig e = script.engine;
    e.num_peers = script.cluster_size;
    return e;
  }

  void schedule_events() {
    std::map<Duration, std::vector<ScenarioEvent>> by_time;
    for (const auto& e : script_.events) by_time[e.at].push_back(e);
    for (auto& [at, events] : by_time) {
      cluster_.scheduler().at(at, [this, at = at, events = events] {
        Selectors sel(cluster_);
        auto& resolved = report_.resolved_selectors[ms(at)];
        auto pick = [&](const std::string& s) {
          const std::int64_t p = sel.resolve(s);
          resolved[s] = p;
          return PeerId{p};
        };
        for (const auto& e : events) apply(e, pick);
      });
    }
  }

  template <typename Pick>
  void apply(const ScenarioEvent& e, Pick& pick) {
    const int n = cluster_.size();
    switch (e.action) {
      case ScenarioEvent::Action::kSetLink: {
        const PeerId a = pick(e.from), b = pick(e.to);
        cluster_.set_link(a, b, e.up);
        if (e.both_directions) cluster_.set_link(b, a, e.up);
        break;
      }
      case ScenarioEvent::Action::kIsolate: {
        const PeerId a = pick(e.from);
        for (int p = 0; p < n; ++p) {
          if (p == a.value) continue;
          cluster_.set_link(a, PeerId{p}, e.up);
          cluster_.set_link(PeerId{p}, a, e.up);
        }
        break;
      }
      case ScenarioEvent::Action::kCrash:
        cluster_.crash(pick(e.from));
        break;
      case ScenarioEvent::Action::kRestart:
        cluster_.restart(pick(e.from));
        break;
      case ScenarioEvent::Action::kHealAll:
        cluster_.heal_all();
        break;
    }
  }

  Command next_command() {
    auto& rng = cluster_.scheduler().rng();
    const auto& w = script_.workload;
    std::uint64_t rank = 0;
    if (w.key_dist == Workload::KeyDist::kZipfian) {
      rank = zipf_(rng);
    } else {
      rank = std::uniform_int_distribution<std::uint64_t>(
          0, static_cast<std::uint64_t>(w.key_count) - 1)(rng);
    }
    std::string key = "key" + std::to_string(rank);
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < w.read_fraction)
      return Command::get(std::move(key));
    std::string value(static_cast<std::size_t>(w.value_len), 'a');
    std::uniform_int_distribution<int> letter('a', 'z');
    for (char& ch : value) ch = static_cast<char>(letter(rng));
    return Command::put(std::move(key), std::move(value));
  }

  void issue(int c) {
    Client& client = clients_[static_cast<std::size_t>(c)];
    const std::uint64_t id = ++next_request_;
    client.request = id;
    client.sent = cluster_.scheduler().now();
    ++inflight_;
    report_.max_inflight = std::max(report_.max_inflight, inflight_);

    const PeerId target{client.target};
    Command cmd = next_command();
    const Duration hop = script_.workload.client_latency;
    cluster_.scheduler().after(hop, [this, c, id, target, cmd = std::move(cmd), hop]() mutable {
      cluster_.submit(target, std::move(cmd), [this, c, id, hop](ClientReply reply) {
        cluster_.scheduler().after(hop, [this, c, id, reply] { on_reply(c, id, reply); });
      });
    });
    cluster_.scheduler().after(script_.workload.request_timeout, [this, c, id] {
      Client& cl = clients_[static_cast<std::size_t>(c)];
      if (cl.request != id) return;
      // Unresponsive node: try the next one.
      cl.target = (cl.target + 1) % script_.cluster_size;
      complete(c, false);
    });
  }

  void on_reply(int c, std::uint64_t id, const ClientReply& reply) {
    Client& client = clients_[static_cast<std::size_t>(c)];
    if (client.request != id) return;
    switch (reply.kind) {
      case ClientReply::Kind::kOk:
        report_.max_rtt = std::max(report_.max_rtt, cluster_.scheduler().now() - client.sent);
        complete(c, true);
        return;
      case ClientReply::Kind::kLeaderHint:
        if (reply.leader && reply.leader->valid() && reply.leader->value < script_.cluster_size)
          client.target = static_cast<int>(reply.leader->value);
        break;
      case ClientReply::Kind::kRetry:
        break;
    }
    complete(c, false);
  }

  void complete(int c, bool ok) {
    Client& client = clients_[static_cast<std::size_t>(c)];
    client.request = 0;
    --inflight_;
    if (ok) {
      ++report_.completed_ops;
      ++completed_since_sample_;
    }
    cluster_.scheduler().after(script_.workload.think, [this, c] { issue(c); });
  }

  void sample() {
    Sample s;
    s.at = cluster_.scheduler().now();
    s.leader = cluster_.leader();
    for (int p = 0; p < cluster_.size(); ++p) {
      Log& log = cluster_.log(PeerId{p});
      s.log_len.push_back(static_cast<std::int64_t>(log.size()));
      s.gle.push_back(log.global_last_executed());
      s.last_executed.push_back(log.last_executed());
      if (auto problem = log.validate())
        cluster_.add_violation("peer " + std::to_string(p) + " log invariant: " + *problem);
    }
    report_.samples.push_back(std::move(s));
    report_.committed_per_interval.push_back(completed_since_sample_);
    completed_since_sample_ = 0;
  }

  void finish() {
    report_.scenario = script_.name;
    report_.seed = script_.seed;
    report_.leader_timeline = cluster_.leaders();
    report_.election_log = cluster_.elections();
    report_.elections_initiated.assign(static_cast<std::size_t>(cluster_.size()), 0);
    for (const auto& e : report_.election_log)
      ++report_.elections_initiated[static_cast<std::size_t>(e.peer.value)];
    report_.commit_rounds = cluster_.commit_rounds();
    for (int p = 0; p < cluster_.size(); ++p)
      if (auto problem = cluster_.log(PeerId{p}).validate())
        cluster_.add_violation("peer " + std::to_string(p) + " log invariant: " + *problem);
    for (auto& v : check_agreement(cluster_)) cluster_.add_violation(std::move(v));
    if (report_.max_inflight > script_.workload.clients)
      cluster_.add_violation("more requests in flight than clients");
    report_.invariant_violations = cluster_.violations();
    report_.trace_hash = cluster_.trace_hash();
    report_.events_executed = cluster_.scheduler().executed();
  }

  const ScenarioScript& script_;
  Cluster cluster_;
  ZipfianGenerator zipf_;
  RunReport report_;
  std::vector<Client> clients_;
  std::uint64_t next_request_ = 0;
  std::int64_t inflight_ = 0;
  std::int64_t completed_since_sample_ = 0;
};

ScenarioEvent link(Duration at, std::string from, std::string to, bool up) {
  ScenarioEvent e;
  e.at = at;
  e.action = ScenarioEvent::Action::kSetLink;
  e.from = std::move(from);
  e.to = std::move(to);
  e.up = up;
  return e;
}

ScenarioEvent on_node(Duration at, ScenarioEvent::Action action, std::string node, bool up = false) {
  ScenarioEvent e;
  e.at = at;
  e.action = action;
  e.from = std::move(node);
  e.up = up;
  return e;
}

ScenarioEvent heal(Duration at) {
  ScenarioEvent e;
  e.at = at;
  e.action = ScenarioEvent::Action::kHealAll;
  return e;
}

// Scaled-down partition window: 18s run, partition from 8s to 10s.
constexpr Duration kPartitionAt = milliseconds(8000);
constexpr Duration kHealAt = milliseconds(10000);

ScenarioScript random_faults(std::uint64_t seed) {
  ScenarioScript s;
  s.name = "random_faults";
  s.seed = seed;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  s.cluster_size = (rng() & 1) ? 5 : 3;
  s.duration = milliseconds(10000);
  const int n = s.cluster_size;
  const Duration faults_end = milliseconds(7500);

  std::uniform_int_distribution<int> peer(0, n - 1);
  std::uniform_int_distribution<int> gap_ms(150, 900);
  std::uniform_int_distribution<int> hold_ms(100, 1500);
  std::uniform_int_distribution<int> kind(0, 9);
  // Crash windows per peer, to keep a majority alive at any instant.
  std::vector<std::pair<Duration, Duration>> down;
  auto crashed_during = [&](Duration from, Duration to) {
    int count = 0;
    for (auto& [a, b] : down)
      if (a < to && from < b) ++count;
    return count;
  };
  std::vector<Duration> busy_until(static_cast<std::size_t>(n), Duration::zero());

  Duration t = milliseconds(1000);
  while (t < faults_end) {
    const int k = kind(rng);
    const Duration end = std::min(t + milliseconds(hold_ms(rng)), faults_end);
    if (k < 4) {
      const int a = peer(rng);
      int b = peer(rng);
      if (a == b) b = (a + 1) % n;
      const bool both = rng() & 1;
      auto e = link(t, std::to_string(a), std::to_string(b), false);
      e.both_directions = both;
      auto r = link(end, std::to_string(a), std::to_string(b), true);
      r.both_directions = both;
      s.events.push_back(e);
      s.events.push_back(r);
    } else if (k < 6) {
      // Cut the current leader off from one follower.
      const int f = std::uniform_int_distribution<int>(0, n - 2)(rng);
      s.events.push_back(link(t, "leader", "follower" + std::to_string(f), false));
    } else if (k < 8) {
      const int a = peer(rng);
      if (busy_until[static_cast<std::size_t>(a)] <= t && (crashed_during(t, end) + 1) * 2 < n) {
        s.events.push_back(on_node(t, ScenarioEvent::Action::kCrash, std::to_string(a)));
        s.events.push_back(on_node(end, ScenarioEvent::Action::kRestart, std::to_string(a)));
        down.emplace_back(t, end);
        busy_until[static_cast<std::size_t>(a)] = end + milliseconds(1);
      }
    } else if (k < 9) {
      s.events.push_back(on_node(t, ScenarioEvent::Action::kIsolate, "leader"));
    } else {
      s.events.push_back(heal(t));
    }
    t += milliseconds(gap_ms(rng));
  }
  s.events.push_back(heal(faults_end));
  std::stable_sort(s.events.begin(), s.events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.at < b.at; });
  return s;
}

}  // namespace

void ScenarioScript::validate() const {
  if (cluster_size < 1 || cluster_size >= kMaxNumPeers)
    throw std::invalid_argument("cluster_size out of range");
  if (duration <= Duration::zero()) throw std::invalid_argument("duration must be positive");
  Duration prev = Duration::zero();
  for (const auto& e : events) {
    if (e.at < prev) throw std::invalid_argument("events must be sorted by at_ms");
    if (e.at > duration) throw std::invalid_argument("event after the end of the run");
    prev = e.at;
    switch (e.action) {
      case ScenarioEvent::Action::kSetLink:
        if (!valid_selector(e.from, cluster_size) || !valid_selector(e.to, cluster_size))
          throw std::invalid_argument("bad set_link peers: " + e.from + " -> " + e.to);
        break;
      case ScenarioEvent::Action::kIsolate:
      case ScenarioEvent::Action::kCrash:
      case ScenarioEvent::Action::kRestart:
        if (!valid_selector(e.from, cluster_size))
          throw std::invalid_argument("bad node selector: " + e.from);
        break;
      case ScenarioEvent::Action::kHealAll:
        break;
    }
  }
  if (workload.clients < 0) throw std::invalid_argument("clients must be >= 0");
  if (workload.key_count < 1) throw std::invalid_argument("key_count must be >= 1");
  if (workload.read_fraction < 0 || workload.read_fraction > 1)
    throw std::invalid_argument("read_fraction must be in [0, 1]");
  if (workload.request_timeout <= Duration::zero() || workload.think < Duration::zero())
    throw std::invalid_argument("bad workload timing");
  if (sample_interval && *sample_interval <= Duration::zero())
    throw std::invalid_argument("sample interval must be positive");
  EngineConfig e = engine;
  e.num_peers = cluster_size;
  try {
    e.validate();
  } catch (const ConfigError& err) {
    throw std::invalid_argument(err.what());
  }
}

RunReport run_scenario(const ScenarioScript& script) {
  script.validate();
  return Runner(script).run();
}

std::vector<std::string> builtin_scenario_names() {
  return {"leader_losing_quorum",  "chained_churn",      "chained_churn_classic",
          "compaction_common",     "compaction_disconnect", "compaction_disconnect_nofill",
          "random_faults"};
}

ScenarioScript builtin_scenario(const std::string& name, std::uint64_t seed) {
  using A = ScenarioEvent::Action;
  ScenarioScript s;
  s.name = name;
  s.seed = seed;
  if (name == "leader_losing_quorum") {
    // Every link is cut except those touching follower3.
    s.cluster_size = 5;
    const std::vector<std::string> cut = {"leader", "follower0", "follower1", "follower2"};
    for (std::size_t i = 0; i < cut.size(); ++i)
      for (std::size_t j = i + 1; j < cut.size(); ++j)
        s.events.push_back(link(kPartitionAt, cut[i], cut[j], false));
    s.events.push_back(heal(kHealAt));
  } else if (name == "chained_churn" || name == "chained_churn_classic") {
    // The leader and follower0 lose each other; follower1 still reaches both.
    s.cluster_size = 3;
    s.events.push_back(link(kPartitionAt, "leader", "follower0", false));
    s.events.push_back(heal(kHealAt));
    s.engine.adaptive.enabled = name == "chained_churn";
  } else if (name == "compaction_common") {
    s.cluster_size = 3;
    s.duration = milliseconds(30000);
  } else if (name == "compaction_disconnect" || name == "compaction_disconnect_nofill") {
    s.cluster_size = 3;
    s.events.push_back(on_node(kPartitionAt, A::kIsolate, "follower0"));
    s.events.push_back(heal(kPartitionAt + milliseconds(5000)));
    if (name == "compaction_disconnect_nofill") s.engine.gap_fill.mode = GapFillMode::kOff;
  } else if (name == "random_faults") {
    return random_faults(seed);
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::int64_t us(Duration d) { return d.count(); }

json engine_to_json(const EngineConfig& e) {
  return json{{"commit_interval_ms", ms(e.commit_interval)},
              {"election_multiplier_lo", e.election_multiplier_lo},
              {"election_multiplier_hi", e.election_multiplier_hi},
              {"rpc_timeout_ms", ms(e.rpc_timeout)},
              {"replay_window", e.replay_window},
              {"adaptive_timeout", adaptive_to_json(e.adaptive)},
              {"gap_fill", gap_fill_to_json(e.gap_fill)}};
}

EngineConfig engine_from_json(const json& j) {
  EngineConfig e;
  e.commit_interval = milliseconds(j.value("commit_interval_ms", ms(e.commit_interval)));
  e.election_multiplier_lo = j.value("election_multiplier_lo", e.election_multiplier_lo);
  e.election_multiplier_hi = j.value("election_multiplier_hi", e.election_multiplier_hi);
  e.rpc_timeout = milliseconds(j.value("rpc_timeout_ms", ms(e.rpc_timeout)));
  e.replay_window = j.value("replay_window", e.replay_window);
  if (auto it = j.find("adaptive_timeout"); it != j.end()) e.adaptive = adaptive_from_json(*it);
  if (auto it = j.find("gap_fill"); it != j.end()) e.gap_fill = gap_fill_from_json(*it);
  return e;
}

json selector_json(const std::string& s) {
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::stoll(s);
  return s;
}

std::string selector_from_json(const json& j) {
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  return j.get<std::string>();
}

}  // namespace

ScenarioScript script_from_json(const json& j) {
  ScenarioScript s;
  try {
    s.name = j.value("name", std::string("custom"));
    s.cluster_size = j.value("cluster_size", s.cluster_size);
    s.duration = milliseconds(j.at("duration_ms").get<std::int64_t>());
    s.seed = j.value("seed", s.seed);
    if (auto it = j.find("sample_interval_ms"); it != j.end())
      s.sample_interval = milliseconds(it->get<std::int64_t>());
    if (auto it = j.find("links"); it != j.end()) {
      s.links.latency = Duration(it->value("latency_us", us(s.links.latency)));
      s.links.jitter = Duration(it->value("jitter_us", us(s.links.jitter)));
    }
    if (auto it = j.find("engine"); it != j.end()) s.engine = engine_from_json(*it);
    if (auto it = j.find("workload"); it != j.end()) {
      const json& w = *it;
      Workload& d = s.workload;
      d.clients = w.value("clients", d.clients);
      d.think = milliseconds(w.value("think_ms", ms(d.think)));
      d.client_latency = Duration(w.value("client_latency_us", us(d.client_latency)));
      d.request_timeout = milliseconds(w.value("request_timeout_ms", ms(d.request_timeout)));
      const std::string dist = w.value("key_dist", std::string("zipfian"));
      if (dist == "zipfian") {
        d.key_dist = Workload::KeyDist::kZipfian;
      } else if (dist == "uniform") {
        d.key_dist = Workload::KeyDist::kUniform;
      } else {
        throw std::invalid_argument("key_dist must be zipfian or uniform");
      }
      d.zipf_theta = w.value("theta", d.zipf_theta);
      d.key_count = w.value("keys", d.key_count);
      d.read_fraction = w.value("read_fraction", d.read_fraction);
      d.value_len = w.value("value_len", d.value_len);
    }
    for (const json& e : j.value("events", json::array())) {
      ScenarioEvent ev;
      ev.at = milliseconds(e.at("at_ms").get<std::int64_t>());
      ev.action = parse_action(e.at("action").get<std::string>());
      if (ev.action == ScenarioEvent::Action::kSetLink) {
        ev.from = selector_from_json(e.at("from"));
        ev.to = selector_from_json(e.at("to"));
        ev.up = e.at("up").get<bool>();
        ev.both_directions = e.value("both_directions", true);
      } else if (ev.action != ScenarioEvent::Action::kHealAll) {
        ev.from = selector_from_json(e.at("node"));
        ev.up = e.value("up", false);
      }
      s.events.push_back(std::move(ev));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad scenario script: ") + e.what());
  }
  s.validate();
  return s;
}

json script_to_json(const ScenarioScript& s) {
  json events = json::array();
  for (const auto& e : s.events) {
    json ev{{"at_ms", ms(e.at)}, {"action", action_name(e.action)}};
    if (e.action == ScenarioEvent::Action::kSetLink) {
      ev["from"] = selector_json(e.from);
      ev["to"] = selector_json(e.to);
      ev["up"] = e.up;
      ev["both_directions"] = e.both_directions;
    } else if (e.action != ScenarioEvent::Action::kHealAll) {
      ev["node"] = selector_json(e.from);
      if (e.action == ScenarioEvent::Action::kIsolate) ev["up"] = e.up;
    }
    events.push_back(std::move(ev));
  }
  const Workload& w = s.workload;
  json j{{"name", s.name},
         {"cluster_size", s.cluster_size},
         {"duration_ms", ms(s.duration)},
         {"seed", s.seed},
         {"links", {{"latency_us", us(s.links.latency)}, {"jitter_us", us(s.links.jitter)}}},
         {"engine", engine_to_json(s.engine)},
         {"workload",
          {{"clients", w.clients},
           {"think_ms", ms(w.think)},
           {"client_latency_us", us(w.client_latency)},
           {"request_timeout_ms", ms(w.request_timeout)},
           {"key_dist", w.key_dist == Workload::KeyDist::kZipfian ? "zipfian" : "uniform"},
           {"theta", w.zipf_theta},
           {"keys", w.key_count},
           {"read_fraction", w.read_fraction},
           {"value_len", w.value_len}}},
         {"events", std::move(events)}};
  if (s.sample_interval) j["sample_interval_ms"] = ms(*s.sample_interval);
  return j;
}

json report_to_json(const RunReport& r) {
  json leaders = json::array();
  for (const auto& l : r.leader_timeline)
    leaders.push_back({{"t_ms", ms(l.at)}, {"peer", l.peer.value}, {"ballot", l.ballot.value}});
  json elections = json::array();
  for (const auto& e : r.election_log)
    elections.push_back({{"t_ms", ms(e.at)}, {"peer", e.peer.value}, {"ballot", e.candidate.value}});
  json t = json::array(), log_len = json::array(), gle = json::array(), le = json::array(),
       leader = json::array();
  for (const auto& s : r.samples) {
    t.push_back(ms(s.at));
    log_len.push_back(s.log_len);
    gle.push_back(s.gle);
    le.push_back(s.last_executed);
    leader.push_back(s.leader ? json(s.leader->value) : json(nullptr));
  }
  json rounds = json::array();
  for (const auto& c : r.commit_rounds)
    rounds.push_back({{"t_ms", ms(c.info.at)},
                      {"leader", c.leader.value},
                      {"ballot", c.info.ballot.value},
                      {"num_oks", c.info.num_oks},
                      {"gle_before", c.info.gle_before},
                      {"gle_after", c.info.gle_after}});
  json resolved = json::object();
  for (const auto& [at, m] : r.resolved_selectors) {
    json entry = json::object();
    for (const auto& [name, peer] : m) entry[name] = peer;
    resolved[std::to_string(at)] = std::move(entry);
  }
  return json{{"scenario", r.scenario},
              {"seed", r.seed},
              {"ok", r.ok()},
              {"leader_timeline", std::move(leaders)},
              {"elections", std::move(elections)},
              {"elections_initiated", r.elections_initiated},
              {"sample_t_ms", std::move(t)},
              {"log_len_series", std::move(log_len)},
              {"gle_series", std::move(gle)},
              {"last_executed_series", std::move(le)},
              {"leader_series", std::move(leader)},
              {"committed_per_interval", r.committed_per_interval},
              {"commit_rounds", std::move(rounds)},
              {"resolved_selectors", std::move(resolved)},
              {"completed_ops", r.completed_ops},
              {"max_inflight", r.max_inflight},
              {"max_rtt_us", us(r.max_rtt)},
              {"invariant_violations", r.invariant_violations},
              {"trace_hash", r.trace_hash},
              {"events_executed", r.events_executed}};
}

}  // namespace mpaxos::sim
