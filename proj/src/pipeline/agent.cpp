// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/pipeline/agent.hpp"

#include <fstream>
#include <iostream>
#include <thread>

#include <spdlog/spdlog.h>

#include "sccv/pipeline/server.hpp"
#include "sccv/traceio/record_codec.hpp"
#include "sccv/traceio/trace_parser.hpp"

namespace sccv::pipeline {

void AgentConfig::validate() const {
  if (interval == 0)
    throw Error("interval must be positive");
  if (flush_period < interval)
    throw Error("flush period must be >= the aggregation interval");
  if (max_retries < 0)
    throw Error("max retries must be >= 0");
  Endpoint::parse(connect);
}

Agent::Agent(AgentConfig config, core::SyscallTable table)
    : config_(std::move(config)), table_(std::move(table)),
      aggregator_(table_.size(), config_.interval),
      endpoint_(Endpoint::parse(config_.connect)) {
  config_.validate();
}

void Agent::enqueue(std::vector<CountVector> &closed) {
  for (const auto &v : closed) {
    pending_.push_back({v.interval_start, traceio::encode_record(v)});
    ++stats_.records_built;
  }
  closed.clear();
}

void Agent::feed(TraceEvent event) {
  if (!config_.host_id.empty())
    event.host_id = config_.host_id;
  ++stats_.events;
  std::vector<CountVector> closed;
  const auto rejected_before = aggregator_.stats().rejected_late;
  aggregator_.add(event, closed);
  stats_.late_events += aggregator_.stats().rejected_late - rejected_before;

  if (!seen_event_ || event.timestamp > newest_)
    newest_ = event.timestamp;
  if (!seen_event_) {
    last_flush_ = newest_;
    seen_event_ = true;
  }
  if (newest_ >= last_flush_ + config_.flush_period) {
    aggregator_.advance_to(newest_, closed);
    enqueue(closed);
    deliver();
    last_flush_ = newest_;
  } else {
    enqueue(closed);
  }
}

void Agent::finish() {
  std::vector<CountVector> closed;
  aggregator_.flush(closed);
  enqueue(closed);
  deliver();
}

bool Agent::ensure_connected() {
  if (socket_.valid() && !socket_.peer_closed())
    return true;
  if (socket_.valid()) {
    socket_.close();
    ++stats_.reconnects;
  }
  auto backoff = config_.initial_backoff;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    try {
      socket_ = connect_tcp(endpoint_);
      const std::uint8_t version = kWireVersion;
      if (socket_.send_all({&version, 1}))
        return true;
      socket_.close();
    } catch (const Error &e) {
      spdlog::debug("connect attempt {} failed: {}", attempt + 1, e.what());
    }
    if (attempt == config_.max_retries)
      break;
    std::this_thread::sleep_for(backoff);
    backoff = std::min(backoff * 2, config_.max_backoff);
  }
  return false;
}

void Agent::deliver() {
  while (!pending_.empty()) {
    if (!ensure_connected())
      throw Error("server " + endpoint_.to_string() + " unreachable after " +
                  std::to_string(config_.max_retries) + " retries; " +
                  std::to_string(stats_.records_sent) + " records sent, " +
                  std::to_string(pending_.size()) + " undelivered");
    while (!pending_.empty()) {
      if (!socket_.send_all(pending_.front().frame)) {
        socket_.close();
        ++stats_.reconnects;
        break;
      }
      pending_.pop_front();
      ++stats_.records_sent;
    }
  }
}

int Agent::run() {
  std::ifstream file;
  std::istream *in = &std::cin;
  if (config_.source != "-") {
    file.open(config_.source);
    if (!file)
      throw Error("cannot open trace source '" + config_.source + "'");
    in = &file;
  }
  traceio::read_trace(
      *in, table_, [&](const TraceEvent &e) { feed(e); },
      [&](const traceio::ParseError &e) {
        ++stats_.parse_errors;
        spdlog::warn("trace {}", e.what());
      });
  finish();
  spdlog::info("agent done: {} events, {} records sent, {} late, {} reconnects",
               stats_.events, stats_.records_sent, stats_.late_events,
               stats_.reconnects);
  return 0;
}

} // namespace sccv::pipeline
