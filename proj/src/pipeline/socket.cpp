// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/pipeline/socket.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

namespace sccv::pipeline {

namespace {

sockaddr_in resolve(const Endpoint &ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  const std::string host = ep.host.empty() ? "0.0.0.0" : ep.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1)
    return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo *res = nullptr;
  if (getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || !res)
    throw Error("cannot resolve host '" + host + "'");
  addr.sin_addr = reinterpret_cast<sockaddr_in *>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return addr;
}

std::string errno_text() { return std::strerror(errno); }

} // namespace

Endpoint Endpoint::parse(const std::string &text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos)
    throw Error("address '" + text + "' is not host:port");
  Endpoint ep;
  if (colon > 0)
    ep.host = text.substr(0, colon);
  const auto port_text = text.substr(colon + 1);
  try {
    std::size_t used = 0;
    const auto port = std::stoul(port_text, &used);
    if (used != port_text.size() || port > 65535)
      throw Error("");
    ep.port = static_cast<std::uint16_t>(port);
  } catch (const std::exception &) {
    throw Error("address '" + text + "' has an invalid port");
  }
  return ep;
}

std::string Endpoint::to_string() const {
  return host + ":" + std::to_string(port);
}

Socket &Socket::operator=(Socket &&other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::shutdown() {
  if (fd_ >= 0)
    ::shutdown(fd_, SHUT_RDWR);
}

bool Socket::send_all(std::span<const std::uint8_t> bytes) {
  while (!bytes.empty()) {
    const auto n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      return false;
    }
    bytes = bytes.subspan(static_cast<std::size_t>(n));
  }
  return true;
}

long Socket::recv_some(std::span<std::uint8_t> buf) {
  while (true) {
    const auto n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n < 0 && errno == EINTR)
      continue;
    return static_cast<long>(n);
  }
}

bool Socket::peer_closed() {
  if (fd_ < 0)
    return true;
  std::uint8_t probe;
  const auto n = ::recv(fd_, &probe, 1, MSG_PEEK | MSG_DONTWAIT);
  if (n == 0)
    return true;
  if (n < 0)
    return errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR;
  return false;
}

Socket listen_tcp(const Endpoint &ep, int backlog) {
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid())
    throw Error("socket: " + errno_text());
  int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  auto addr = resolve(ep);
  if (::bind(s.fd(), reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) != 0)
    throw Error("bind " + ep.to_string() + ": " + errno_text());
  if (::listen(s.fd(), backlog) != 0)
    throw Error("listen " + ep.to_string() + ": " + errno_text());
  return s;
}

std::uint16_t local_port(const Socket &s) {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(s.fd(), reinterpret_cast<sockaddr *>(&addr), &len) != 0)
    throw Error("getsockname: " + errno_text());
  return ntohs(addr.sin_port);
}

Socket connect_tcp(const Endpoint &ep) {
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid())
    throw Error("socket: " + errno_text());
  auto addr = resolve(ep);
  if (::connect(s.fd(), reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) != 0)
    throw Error("connect " + ep.to_string() + ": " + errno_text());
  int one = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return s;
}

} // namespace sccv::pipeline
