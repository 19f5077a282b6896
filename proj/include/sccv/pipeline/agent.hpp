// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <chrono>
#include <deque>

#include "sccv/core/aggregator.hpp"
#include "sccv/core/syscall_table.hpp"
#include "sccv/pipeline/socket.hpp"

namespace sccv::pipeline {

struct AgentConfig {
  std::string source = "-"; // trace file path, "-" for stdin
  Nanos interval = kNanosPerSecond;
  std::string connect = "127.0.0.1:7400";
  Nanos flush_period = kNanosPerSecond;
  std::string host_id; // replaces the host field of every event when set
  int max_retries = 8;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds max_backoff{5000};

  void validate() const;
};

struct AgentStats {
  std::uint64_t events = 0;
  std::uint64_t parse_errors = 0;
  std::uint64_t late_events = 0;
  std::uint64_t records_built = 0;
  std::uint64_t records_sent = 0;
  std::uint64_t reconnects = 0;
};

/// Endpoint agent: aggregates events into count vectors and ships them as
/// record frames. Records are sent every flush period of trace time, so at
/// most one flush period of records is buffered. When the connection drops,
/// reading pauses while the agent reconnects with exponential backoff, then
/// the unsent records follow. A record leaves the buffer only after it was
/// written completely, so the server never receives an interval twice.
class Agent {
public:
  Agent(AgentConfig config, core::SyscallTable table);

  void feed(TraceEvent event);
  /// Closes every open interval and delivers everything buffered. Throws
  /// Error when the server stays unreachable after max_retries.
  void finish();

  /// Reads config.source to the end, then finish(). Returns 0 on success.
  int run();

  const AgentStats &stats() const { return stats_; }
  std::size_t buffered() const { return pending_.size(); }

private:
  struct Pending {
    Nanos interval_start;
    std::vector<std::uint8_t> frame;
  };

  void enqueue(std::vector<CountVector> &closed);
  void deliver();
  bool ensure_connected();

  AgentConfig config_;
  core::SyscallTable table_;
  core::Aggregator aggregator_;
  std::deque<Pending> pending_;
  Socket socket_;
  Endpoint endpoint_;
  Nanos newest_ = 0;
  Nanos last_flush_ = 0;
  bool seen_event_ = false;
  AgentStats stats_;
};

} // namespace sccv::pipeline
