// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

// Shared test fixtures.

#pragma once

#include <string>
#include <vector>

#include "sccv/core/syscall_table.hpp"
#include "sccv/core/types.hpp"

namespace sccv::testing {

/// The six-call table of the worked count-vector example.
inline core::SyscallTable six_call_table() {
  return core::SyscallTable::parse("0 exit\n1 fork\n2 read\n3 write\n4 open\n5 close\n");
}

/// Events named in `calls`, evenly spaced inside second `second`.
inline std::vector<TraceEvent> events_in_second(const core::SyscallTable &table,
                                                const std::vector<std::string> &calls,
                                                Nanos second,
                                                const std::string &host = "hostA",
                                                std::uint32_t pid = 42,
                                                const std::string &name = "foo") {
  std::vector<TraceEvent> out;
  const Nanos step = kNanosPerSecond / (calls.size() + 1);
  for (std::size_t i = 0; i < calls.size(); ++i)
    out.push_back({second * kNanosPerSecond + (i + 1) * step, host, pid, name,
                   table.index_of(calls[i])});
  return out;
}

inline CountVector make_vector(std::vector<std::uint32_t> counts, Nanos start_s,
                               const std::string &host = "hostA",
                               std::uint32_t pid = 42, const std::string &name = "foo") {
  CountVector v;
  v.host_id = host;
  v.pid = pid;
  v.declared_name = name;
  v.interval_start = start_s * kNanosPerSecond;
  v.interval_len = kNanosPerSecond;
  v.counts = std::move(counts);
  return v;
}

} // namespace sccv::testing
