// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/pipeline/server.hpp"

#include <sys/socket.h>

#include <cerrno>
#include <cstring>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "sccv/traceio/record_codec.hpp"

namespace sccv::pipeline {

void ServerConfig::validate() const {
  if (queue_capacity < 1)
    throw Error("queue capacity must be >= 1");
  monitor.thresholds.validate();
  if (monitor.debounce < 1)
    throw Error("debounce must be >= 1");
  Endpoint::parse(listen);
}

Server::Server(ServerConfig config, ml::Checkpoint model)
    : config_(std::move(config)),
      monitor_(std::move(model), config_.malicious, config_.monitor),
      queue_(config_.queue_capacity) {
  config_.validate();
}

Server::~Server() { stop(); }

void Server::start() {
  if (running_)
    return;
  if (!config_.alerts_path.empty()) {
    alerts_out_.open(config_.alerts_path, std::ios::app);
    if (!alerts_out_)
      throw Error("cannot open alert sink '" + config_.alerts_path + "'");
  }
  if (!config_.records_path.empty()) {
    records_out_.open(config_.records_path, std::ios::binary | std::ios::app);
    if (!records_out_)
      throw Error("cannot open record sink '" + config_.records_path + "'");
  }

  listener_ = listen_tcp(Endpoint::parse(config_.listen));
  port_ = local_port(listener_);
  stopping_ = false;
  running_ = true;

  if (config_.metrics_port >= 0) {
    metrics_ = std::make_unique<httplib::Server>();
    metrics_->Get("/metrics", [this](const httplib::Request &, httplib::Response &res) {
      res.set_content(metrics_text(), "text/plain");
    });
    const auto host = Endpoint::parse(config_.listen).host;
    if (config_.metrics_port == 0)
      metrics_port_ = static_cast<std::uint16_t>(metrics_->bind_to_any_port(host));
    else if (metrics_->bind_to_port(host, config_.metrics_port))
      metrics_port_ = static_cast<std::uint16_t>(config_.metrics_port);
    else
      throw Error("cannot bind metrics port " + std::to_string(config_.metrics_port));
    metrics_thread_ = std::thread([this] { metrics_->listen_after_bind(); });
  }

  consumer_ = std::thread([this] { consume_loop(); });
  acceptor_ = std::thread([this] { accept_loop(); });
  spdlog::info("server listening on {}:{}", Endpoint::parse(config_.listen).host, port_);
}

void Server::stop() {
  if (!running_)
    return;
  stopping_ = true;
  listener_.shutdown();
  if (acceptor_.joinable())
    acceptor_.join();
  listener_.close();
  reap_connections(true);
  queue_.close();
  if (consumer_.joinable())
    consumer_.join();
  if (metrics_) {
    metrics_->stop();
    if (metrics_thread_.joinable())
      metrics_thread_.join();
    metrics_.reset();
  }
  alerts_out_.close();
  records_out_.close();
  running_ = false;
  spdlog::info("server stopped: {} records in, {} dropped, {} windows",
               counters_.records_in.load(), counters_.records_dropped.load(),
               counters_.windows_classified.load());
}

void Server::reap_connections(bool all) {
  std::list<std::unique_ptr<Connection>> finished;
  {
    std::lock_guard lock(conn_mu_);
    for (auto it = connections_.begin(); it != connections_.end();) {
      if (all)
        (*it)->socket.shutdown();
      if (all || (*it)->done) {
        finished.push_back(std::move(*it));
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto &c : finished)
    if (c->thread.joinable())
      c->thread.join();
}

void Server::accept_loop() {
  while (!stopping_) {
    const int fd = ::accept4(listener_.fd(), nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (stopping_)
        break;
      if (errno == EINTR || errno == ECONNABORTED)
        continue;
      spdlog::warn("accept failed: {}", std::strerror(errno));
      break;
    }
    ++counters_.connections;
    reap_connections(false);
    auto conn = std::make_unique<Connection>();
    conn->socket = Socket(fd);
    auto *raw = conn.get();
    std::lock_guard lock(conn_mu_);
    if (stopping_) {
      conn->socket.shutdown();
      continue;
    }
    connections_.push_back(std::move(conn));
    raw->thread = std::thread([this, raw] { read_loop(*raw); });
  }
}

void Server::read_loop(Connection &conn) {
  const auto table_size = monitor_.model().config.input_dim;
  std::vector<std::uint8_t> buf;
  std::vector<std::uint8_t> chunk(64 * 1024);
  std::size_t consumed = 0;
  bool version_seen = false;
  try {
    while (true) {
      const long n = conn.socket.recv_some(chunk);
      if (n <= 0)
        break;
      buf.insert(buf.end(), chunk.begin(), chunk.begin() + n);
      if (!version_seen) {
        if (buf[0] != kWireVersion)
          throw traceio::FrameError("unsupported wire version " +
                                    std::to_string(buf[0]));
        version_seen = true;
        consumed = 1;
      }
      while (true) {
        const std::span<const std::uint8_t> rest(buf.data() + consumed,
                                                 buf.size() - consumed);
        const auto len = traceio::peek_frame_length(rest);
        if (!len || *len > rest.size())
          break;
        auto record = traceio::decode_record(rest.first(*len), table_size);
        consumed += *len;
        ++counters_.records_in;
        if (queue_.push(std::move(record)))
          ++counters_.records_dropped;
      }
      if (consumed > 0) {
        buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(consumed));
        consumed = 0;
      }
    }
  } catch (const traceio::FrameError &e) {
    ++counters_.frames_malformed;
    spdlog::warn("closing connection after malformed frame: {}", e.what());
  }
  conn.socket.shutdown();
  conn.done = true;
}

void Server::consume_loop() {
  std::vector<CountVector> batch;
  Monitor::Output out;
  std::vector<std::uint8_t> frame;
  while (true) {
    batch.clear();
    if (!queue_.pop_batch(batch, 1024, std::chrono::milliseconds(100)))
      break;
    out.verdicts.clear();
    out.alerts.clear();
    const auto ignored_before = monitor_.ignored_records();
    const auto rejected = monitor_.process_batch(batch, out);
    if (rejected > 0)
      spdlog::warn("{} records ignored: width does not match model input dimension",
                   rejected);
    counters_.records_ignored += rejected + (monitor_.ignored_records() - ignored_before);
    counters_.records_processed += batch.size() - rejected;
    if (records_out_.is_open()) {
      const auto width = monitor_.model().config.input_dim;
      for (const auto &record : batch) {
        if (record.counts.size() != width)
          continue;
        frame.clear();
        traceio::encode_record_into(record, frame);
        records_out_.write(reinterpret_cast<const char *>(frame.data()),
                           static_cast<std::streamsize>(frame.size()));
      }
    }
    counters_.windows_classified += out.verdicts.size();
    if (verdict_observer_)
      for (const auto &v : out.verdicts)
        verdict_observer_(v);
    for (const auto &a : out.alerts) {
      switch (a.kind) {
      case detect::VerdictKind::novelty:
        ++counters_.alerts_novelty;
        break;
      case detect::VerdictKind::non_grata:
        ++counters_.alerts_non_grata;
        break;
      case detect::VerdictKind::masquerade:
        ++counters_.alerts_masquerade;
        break;
      case detect::VerdictKind::normal:
        break;
      }
      const auto line = detect::format_alert(a, monitor_.registry());
      if (alerts_out_.is_open())
        alerts_out_ << line << '\n';
      else
        spdlog::warn("alert {}", line);
    }
    if (alerts_out_.is_open())
      alerts_out_.flush();
    if (records_out_.is_open())
      records_out_.flush();
  }
}

std::string Server::metrics_text() const {
  std::string out;
  auto line = [&](const char *name, std::uint64_t v) {
    out += name;
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  };
  line("connections_total", counters_.connections);
  line("records_in_total", counters_.records_in);
  line("records_dropped_total", counters_.records_dropped);
  line("records_ignored_total", counters_.records_ignored);
  line("frames_malformed_total", counters_.frames_malformed);
  line("records_processed_total", counters_.records_processed);
  line("windows_classified_total", counters_.windows_classified);
  line("alerts_novelty_total", counters_.alerts_novelty);
  line("alerts_non_grata_total", counters_.alerts_non_grata);
  line("alerts_masquerade_total", counters_.alerts_masquerade);
  line("queue_depth", queue_.size());
  line("queue_high_water", queue_.high_water());
  return out;
}

} // namespace sccv::pipeline
