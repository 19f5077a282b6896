// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sccv {

/// Nanoseconds since the Unix epoch.
using Nanos = std::uint64_t;
using SyscallIndex = std::uint16_t;

inline constexpr Nanos kNanosPerSecond = 1'000'000'000ULL;

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One observed system call.
struct TraceEvent {
  Nanos timestamp = 0;
  std::string host_id;
  std::uint32_t pid = 0;
  std::string declared_name;
  SyscallIndex syscall = 0;

  bool operator==(const TraceEvent &) const = default;
};

/// Identity of a monitored process: (host, pid).
struct StreamKey {
  std::string host_id;
  std::uint32_t pid = 0;

  auto operator<=>(const StreamKey &) const = default;
  bool operator==(const StreamKey &) const = default;
};

struct StreamKeyHash {
  std::size_t operator()(const StreamKey &k) const noexcept {
    return std::hash<std::string>{}(k.host_id) * 1000003u ^ k.pid;
  }
};

/// Per-interval syscall counts for one process.
struct CountVector {
  std::string host_id;
  std::uint32_t pid = 0;
  std::string declared_name;
  Nanos interval_start = 0;
  Nanos interval_len = kNanosPerSecond;
  std::vector<std::uint32_t> counts;

  StreamKey key() const { return {host_id, pid}; }
  std::uint64_t total() const;

  bool operator==(const CountVector &) const = default;
};

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// W consecutive L1-normalized count vectors, one row per interval.
struct NormalizedSequence {
  RowMatrix rows;
  std::optional<int> label;
  int scale = 1;

  // Where the window came from. Empty for hand-built sequences.
  std::string host_id;
  std::uint32_t pid = 0;
  std::string declared_name;
  Nanos window_start = 0;
  Nanos window_end = 0;

  std::size_t length() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t width() const { return static_cast<std::size_t>(rows.cols()); }
};

} // namespace sccv
