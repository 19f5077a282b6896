// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <atomic>
#include <fstream>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <thread>

#include "sccv/pipeline/bounded_queue.hpp"
#include "sccv/pipeline/monitor.hpp"
#include "sccv/pipeline/socket.hpp"

namespace httplib {
class Server;
}

namespace sccv::pipeline {

/// First byte an agent sends on a new connection.
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kDefaultQueueCapacity = 65536;

struct ServerConfig {
  std::string listen = "127.0.0.1:7400";
  std::size_t queue_capacity = kDefaultQueueCapacity;
  MonitorConfig monitor;
  std::vector<std::string> malicious;
  int metrics_port = -1;     // -1 disabled, 0 ephemeral
  std::string alerts_path;   // alert lines; empty logs them instead
  std::string records_path;  // every consumed record, in consumption order

  void validate() const;
};

struct ServerCounters {
  std::atomic<std::uint64_t> connections{0};
  std::atomic<std::uint64_t> records_in{0};
  std::atomic<std::uint64_t> records_dropped{0};
  std::atomic<std::uint64_t> records_ignored{0};
  std::atomic<std::uint64_t> frames_malformed{0};
  std::atomic<std::uint64_t> records_processed{0};
  std::atomic<std::uint64_t> windows_classified{0};
  std::atomic<std::uint64_t> alerts_novelty{0};
  std::atomic<std::uint64_t> alerts_non_grata{0};
  std::atomic<std::uint64_t> alerts_masquerade{0};
};

/// Monitoring server: one reader thread per agent connection feeding a
/// bounded drop-oldest queue, and a single consumer thread that runs every
/// record through a Monitor.
class Server {
public:
  Server(ServerConfig config, ml::Checkpoint model);
  ~Server();
  Server(const Server &) = delete;
  Server &operator=(const Server &) = delete;

  /// Binds and starts all threads. Throws on bind failure.
  void start();
  /// Stops accepting, closes connections, drains the queue and joins.
  void stop();

  std::uint16_t port() const { return port_; }
  std::uint16_t metrics_port() const { return metrics_port_; }
  const ServerCounters &counters() const { return counters_; }
  /// Plain-text "name value" lines.
  std::string metrics_text() const;
  std::size_t queue_high_water() const { return queue_.high_water(); }

  /// Called from the consumer thread for every verdict. Set before start().
  void on_verdict(std::function<void(const detect::Verdict &)> fn) {
    verdict_observer_ = std::move(fn);
  }

private:
  struct Connection {
    Socket socket;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void read_loop(Connection &conn);
  void consume_loop();
  void reap_connections(bool all);

  ServerConfig config_;
  Monitor monitor_;
  BoundedQueue<CountVector> queue_;
  ServerCounters counters_;
  std::function<void(const detect::Verdict &)> verdict_observer_;

  Socket listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  bool running_ = false;
  std::thread acceptor_;
  std::thread consumer_;
  std::mutex conn_mu_;
  std::list<std::unique_ptr<Connection>> connections_;

  std::unique_ptr<httplib::Server> metrics_;
  std::thread metrics_thread_;
  std::uint16_t metrics_port_ = 0;

  std::ofstream alerts_out_;
  std::ofstream records_out_;
};

} // namespace sccv::pipeline
