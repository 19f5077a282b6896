// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "sccv/core/types.hpp"

namespace sccv::pipeline {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  /// "host:port" or ":port".
  static Endpoint parse(const std::string &text);
  std::string to_string() const;
};

/// Owning TCP socket descriptor.
class Socket {
public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket &&other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket &operator=(Socket &&other) noexcept;
  Socket(const Socket &) = delete;
  Socket &operator=(const Socket &) = delete;
  ~Socket() { close(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void close();
  /// Wakes up threads blocked on this socket without releasing the fd.
  void shutdown();

  /// Writes everything or returns false (peer gone).
  bool send_all(std::span<const std::uint8_t> bytes);
  /// Blocking read of at most buf.size() bytes; 0 on orderly close, -1 on
  /// error.
  long recv_some(std::span<std::uint8_t> buf);
  /// True when the peer has closed or reset the connection. Never blocks.
  bool peer_closed();

private:
  int fd_ = -1;
};

/// Listening socket with SO_REUSEADDR. Port 0 binds an ephemeral port.
Socket listen_tcp(const Endpoint &ep, int backlog = 512);
std::uint16_t local_port(const Socket &s);

/// Throws Error when the connection cannot be established.
Socket connect_tcp(const Endpoint &ep);

} // namespace sccv::pipeline
