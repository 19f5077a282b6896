// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <functional>
#include <istream>
#include <ostream>
#include <string_view>

#include "sccv/core/syscall_table.hpp"
#include "sccv/core/types.hpp"

namespace sccv::traceio {

/// Malformed trace line. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string &what);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Parses "timestamp_ns\thost_id\tpid\tdeclared_name\tsyscall_name".
/// Unknown syscall names map to the table's reserved index.
TraceEvent parse_trace_line(std::string_view line,
                            const core::SyscallTable &table,
                            std::size_t line_no = 0);

/// Formats an event in the layout parse_trace_line() accepts.
std::string format_trace_line(const TraceEvent &event,
                              const core::SyscallTable &table);

struct TraceReadStats {
  std::size_t lines = 0;
  std::size_t events = 0;
  std::size_t errors = 0;
};

/// Reads a trace stream line by line. Blank lines are skipped. A malformed
/// line throws unless `on_error` is set, in which case it is reported there
/// and skipped.
TraceReadStats
read_trace(std::istream &in, const core::SyscallTable &table,
           const std::function<void(const TraceEvent &)> &on_event,
           const std::function<void(const ParseError &)> &on_error = {});

} // namespace sccv::traceio
