// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "fixtures.hpp"
#include "sccv/core/aggregator.hpp"
#include "sccv/pipeline/agent.hpp"
#include "sccv/pipeline/bounded_queue.hpp"
#include "sccv/pipeline/monitor.hpp"
#include "sccv/pipeline/server.hpp"
#include "sccv/synth/generator.hpp"
#include "sccv/synth/profile.hpp"
#include "sccv/traceio/record_codec.hpp"

// Last: its resolver headers define macros that clash with Eigen.
#include <httplib.h>

using namespace sccv;
using namespace std::chrono_literals;
using sccv::testing::make_vector;
using sccv::testing::six_call_table;

namespace {

ml::Checkpoint tiny_model(std::uint64_t seed = 1) {
  ml::Checkpoint ck;
  ck.config.input_dim = 6;
  ck.config.hidden = 4;
  ck.config.classes = 3;
  ck.params = ml::init_model(ck.config, seed);
  ck.class_names = {"foo", "bar", "baz"};
  return ck;
}

template <class Pred> bool wait_until(Pred pred, std::chrono::milliseconds limit = 10s) {
  const auto deadline = std::chrono::steady_clock::now() + limit;
  while (!pred()) {
    if (std::chrono::steady_clock::now() > deadline)
      return false;
    std::this_thread::sleep_for(5ms);
  }
  return true;
}

std::filesystem::path temp_path(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / "sccv-tests";
  std::filesystem::create_directories(dir);
  const auto p = dir / (name + "-" + std::to_string(::getpid()));
  std::filesystem::remove(p);
  return p;
}

pipeline::ServerConfig loopback_config() {
  pipeline::ServerConfig cfg;
  cfg.listen = "127.0.0.1:0";
  cfg.monitor.window = 5;
  cfg.monitor.debounce = 1;
  return cfg;
}

// Events of one six-call process, rich enough to fill every second.
std::vector<TraceEvent> process_events(double seconds, const std::string &host,
                                       std::uint32_t pid, std::uint64_t seed,
                                       Nanos start = 0) {
  synth::ProcessProfile p;
  p.name = "foo";
  p.states.push_back({{0.1, 0.1, 0.3, 0.3, 0.1, 0.1}, 30.0});
  p.states.push_back({{0.0, 0.0, 0.1, 0.1, 0.4, 0.4}, 15.0});
  p.transition = {{0.0, 1.0}, {1.0, 0.0}};
  p.dwell = 2.0;
  return synth::generate_events(p, seconds, host, pid, seed, start);
}

std::uint64_t total_counts(const std::vector<CountVector> &vs) {
  std::uint64_t n = 0;
  for (const auto &v : vs)
    n += v.total();
  return n;
}

} // namespace

TEST_CASE("bounded queue drops the oldest item when full") {
  pipeline::BoundedQueue<int> q(3);
  CHECK(!q.push(1));
  CHECK(!q.push(2));
  CHECK(!q.push(3));
  CHECK(q.push(4));
  CHECK(q.size() == 3);
  CHECK(q.high_water() == 3);
  std::vector<int> out;
  CHECK(q.pop_batch(out, 10, 10ms));
  CHECK(out == std::vector<int>{2, 3, 4});
  q.close();
  out.clear();
  CHECK(!q.pop_batch(out, 10, 10ms));
}

TEST_CASE("monitor keeps one independent state per identity") {
  pipeline::MonitorConfig mc;
  mc.window = 10;
  pipeline::Monitor m(tiny_model(), {}, mc);
  pipeline::Monitor::Output out;
  std::size_t verdicts_per_id[4] = {};
  for (Nanos s = 0; s < 12; ++s) {
    int id = 0;
    for (const std::string host : {"agent1", "agent2"})
      for (std::uint32_t pid : {10u, 20u}) {
        out.verdicts.clear();
        m.process(make_vector({1, 2, 3, 0, 0, 1}, s, host, pid, "foo"), out);
        verdicts_per_id[id++] += out.verdicts.size();
        for (const auto &v : out.verdicts) {
          CHECK(v.window.host_id == host);
          CHECK(v.window.pid == pid);
        }
      }
  }
  CHECK(m.processes() == 4);
  // Windows at seconds 9, 10, 11 for every identity.
  for (auto n : verdicts_per_id)
    CHECK(n == 3);
}

TEST_CASE("monitor rejects a model whose registry does not fit") {
  auto ck = tiny_model();
  CHECK_THROWS_AS(pipeline::Monitor(ck, {"nosuch"}, {}), Error);
  CHECK_NOTHROW(pipeline::Monitor(ck, {"baz"}, {}));
}

TEST_CASE("server: records flow, malformed frames close only their connection") {
  pipeline::Server server(loopback_config(), tiny_model());
  server.start();
  const pipeline::Endpoint ep{"127.0.0.1", server.port()};

  auto good = pipeline::connect_tcp(ep);
  const std::uint8_t version = pipeline::kWireVersion;
  REQUIRE(good.send_all({&version, 1}));
  for (Nanos s = 0; s < 8; ++s)
    REQUIRE(good.send_all(traceio::encode_record(make_vector({1, 2, 3, 0, 0, 1}, s))));

  auto bad = pipeline::connect_tcp(ep);
  REQUIRE(bad.send_all({&version, 1}));
  auto frame = traceio::encode_record(make_vector({1, 2, 3, 0, 0, 1}, 0, "evil", 1));
  frame[4] = 77; // unknown record version
  bad.send_all(frame);
  CHECK(wait_until([&] { return server.counters().frames_malformed == 1; }));
  CHECK(wait_until([&] { return bad.peer_closed(); }));

  auto wrong_version = pipeline::connect_tcp(ep);
  const std::uint8_t v9 = 9;
  wrong_version.send_all({&v9, 1});
  CHECK(wait_until([&] { return server.counters().frames_malformed == 2; }));

  // The first connection keeps working.
  for (Nanos s = 8; s < 10; ++s)
    REQUIRE(good.send_all(traceio::encode_record(make_vector({1, 2, 3, 0, 0, 1}, s))));
  CHECK(wait_until([&] { return server.counters().records_processed == 10; }));
  // W=5 with stride 1 over 10 consecutive seconds.
  CHECK(server.counters().windows_classified == 6);
  CHECK(server.counters().records_dropped == 0);
  server.stop();
}

TEST_CASE("server: metrics endpoint serves counter lines") {
  auto cfg = loopback_config();
  cfg.metrics_port = 0;
  pipeline::Server server(cfg, tiny_model());
  server.start();
  REQUIRE(server.metrics_port() != 0);
  httplib::Client client("127.0.0.1", server.metrics_port());
  const auto res = client.Get("/metrics");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body.find("records_in_total 0\n") != std::string::npos);
  CHECK(res->body.find("records_dropped_total") != std::string::npos);
  CHECK(res->body.find("windows_classified_total") != std::string::npos);
  server.stop();
}

TEST_CASE("agent: bounded record volume and idle source") {
  pipeline::Server server(loopback_config(), tiny_model());
  server.start();
  pipeline::AgentConfig ac;
  ac.connect = "127.0.0.1:" + std::to_string(server.port());

  pipeline::Agent agent(ac, six_call_table());
  const auto events = process_events(60, "hostA", 5, 3);
  REQUIRE(events.size() > 600);
  for (const auto &e : events)
    agent.feed(e);
  agent.finish();
  CHECK(agent.stats().records_sent <= 60);
  CHECK(agent.stats().records_sent == agent.stats().records_built);
  CHECK(wait_until([&] { return server.counters().records_in == agent.stats().records_sent; }));

  pipeline::Agent idle(ac, six_call_table());
  idle.finish();
  CHECK(idle.stats().records_sent == 0);
  server.stop();
}

TEST_CASE("agent: unreachable server fails with a summary") {
  // Grab a free port, then release it so nothing listens there.
  std::uint16_t port;
  {
    auto s = pipeline::listen_tcp({"127.0.0.1", 0});
    port = pipeline::local_port(s);
  }
  pipeline::AgentConfig ac;
  ac.connect = "127.0.0.1:" + std::to_string(port);
  ac.max_retries = 2;
  ac.initial_backoff = 1ms;
  pipeline::Agent agent(ac, six_call_table());
  for (const auto &e : process_events(3, "h", 1, 1))
    agent.feed(e);
  CHECK_THROWS_WITH_AS(agent.finish(), doctest::Contains("unreachable"), Error);
}

TEST_CASE("agent: server restart mid-run yields no duplicate intervals") {
  const auto records_a = temp_path("restart-a.records");
  const auto records_b = temp_path("restart-b.records");
  auto cfg = loopback_config();
  cfg.records_path = records_a.string();
  auto first = std::make_unique<pipeline::Server>(cfg, tiny_model());
  first->start();
  const auto port = first->port();

  pipeline::AgentConfig ac;
  ac.connect = "127.0.0.1:" + std::to_string(port);
  ac.initial_backoff = 5ms;
  pipeline::Agent agent(ac, six_call_table());
  const auto events = process_events(60, "hostA", 5, 8);
  const auto half = std::partition_point(events.begin(), events.end(), [](const TraceEvent &e) {
    return e.timestamp < 30 * kNanosPerSecond;
  });
  for (auto it = events.begin(); it != half; ++it)
    agent.feed(*it);
  const auto sent_before = agent.stats().records_sent;
  CHECK(wait_until([&] { return first->counters().records_processed == sent_before; }));
  first->stop();
  first.reset();

  cfg.listen = "127.0.0.1:" + std::to_string(port);
  cfg.records_path = records_b.string();
  pipeline::Server second(cfg, tiny_model());
  second.start();
  for (auto it = half; it != events.end(); ++it)
    agent.feed(*it);
  agent.finish();
  CHECK(agent.stats().reconnects >= 1);
  CHECK(wait_until([&] {
    return second.counters().records_processed + sent_before >= agent.stats().records_sent;
  }));
  second.stop();

  std::ifstream in_a(records_a, std::ios::binary), in_b(records_b, std::ios::binary);
  auto stored = traceio::read_records(in_a, 6);
  const auto later = traceio::read_records(in_b, 6);
  stored.insert(stored.end(), later.begin(), later.end());
  std::set<Nanos> seen;
  for (const auto &v : stored)
    CHECK(seen.insert(v.interval_start).second);
  CHECK(!later.empty());
  // Nothing was lost either, since the agent resends unacknowledged data
  // and the first server was stopped only after draining.
  const auto expected = core::aggregate(events, kNanosPerSecond, 6);
  CHECK(stored.size() <= expected.size());
  std::filesystem::remove(records_a);
  std::filesystem::remove(records_b);
}

TEST_CASE("end to end: count conservation and replay equivalence") {
  const auto records = temp_path("e2e.records");
  const auto alerts = temp_path("e2e.alerts");
  auto cfg = loopback_config();
  cfg.records_path = records.string();
  cfg.alerts_path = alerts.string();
  cfg.monitor.thresholds = {0.34, 0.36}; // make every verdict kind reachable
  pipeline::Server server(cfg, tiny_model(4));
  std::mutex mu;
  std::vector<detect::Verdict> live;
  server.on_verdict([&](const detect::Verdict &v) {
    std::lock_guard lock(mu);
    live.push_back(v);
  });
  server.start();

  // Two agents with two processes each, interleaved in trace time.
  std::uint64_t emitted = 0, sent = 0;
  std::vector<std::thread> agents;
  std::mutex stats_mu;
  for (const std::string host : {"agent1", "agent2"}) {
    agents.emplace_back([&, host] {
      pipeline::AgentConfig ac;
      ac.connect = "127.0.0.1:" + std::to_string(server.port());
      pipeline::Agent agent(ac, six_call_table());
      auto ev = process_events(40, host, 100, std::hash<std::string>{}(host));
      const auto other = process_events(40, host, 200, 7 + ev.size());
      ev.insert(ev.end(), other.begin(), other.end());
      std::stable_sort(ev.begin(), ev.end(), [](const TraceEvent &a, const TraceEvent &b) {
        return a.timestamp < b.timestamp;
      });
      for (const auto &e : ev)
        agent.feed(e);
      agent.finish();
      std::lock_guard lock(stats_mu);
      emitted += total_counts(core::aggregate(ev, kNanosPerSecond, 6));
      sent += agent.stats().records_sent;
    });
  }
  for (auto &t : agents)
    t.join();
  CHECK(wait_until([&] { return server.counters().records_processed == sent; }));
  CHECK(server.counters().records_dropped == 0);
  server.stop();

  std::ifstream in(records, std::ios::binary);
  const auto stored = traceio::read_records(in, 6);
  CHECK(stored.size() == sent);
  CHECK(total_counts(stored) == emitted);

  // Replay through an offline monitor with the same settings.
  pipeline::Monitor offline(tiny_model(4), {}, cfg.monitor);
  pipeline::Monitor::Output out;
  for (const auto &r : stored)
    offline.process(r, out);
  CHECK(offline.processes() == 4);
  REQUIRE(out.verdicts.size() == live.size());
  CHECK(out.verdicts == live);

  std::ifstream alert_in(alerts);
  std::size_t lines = 0;
  for (std::string line; std::getline(alert_in, line);)
    ++lines;
  CHECK(lines == out.alerts.size());
  std::filesystem::remove(records);
  std::filesystem::remove(alerts);
}
