// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/traceio/trace_parser.hpp"

#include <array>
#include <charconv>
#include <string>

namespace sccv::traceio {

namespace {

std::string where(std::size_t line_no) {
  return line_no ? "line " + std::to_string(line_no) + ": " : std::string{};
}

template <typename Int>
bool parse_int(std::string_view s, Int &out) {
  if (s.empty())
    return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

} // namespace

ParseError::ParseError(std::size_t line, const std::string &what)
    : Error(where(line) + what), line_(line) {}

TraceEvent parse_trace_line(std::string_view line,
                            const core::SyscallTable &table,
                            std::size_t line_no) {
  if (!line.empty() && line.back() == '\r')
    line.remove_suffix(1);

  std::array<std::string_view, 5> fields;
  std::size_t n = 0;
  while (true) {
    const auto tab = line.find('\t');
    if (n == fields.size())
      throw ParseError(line_no, "expected 5 tab-separated fields, got more");
    fields[n++] = line.substr(0, tab);
    if (tab == std::string_view::npos)
      break;
    line.remove_prefix(tab + 1);
  }
  if (n != fields.size())
    throw ParseError(line_no, "expected 5 tab-separated fields, got " +
                                  std::to_string(n));

  TraceEvent ev;
  if (!parse_int(fields[0], ev.timestamp))
    throw ParseError(line_no, "timestamp is not a non-negative integer");
  if (fields[1].empty())
    throw ParseError(line_no, "empty host id");
  ev.host_id = std::string(fields[1]);
  if (!parse_int(fields[2], ev.pid))
    throw ParseError(line_no, "pid is not a non-negative integer");
  ev.declared_name = std::string(fields[3]);
  if (fields[4].empty())
    throw ParseError(line_no, "empty syscall name");
  ev.syscall = table.index_of(fields[4]);
  return ev;
}

std::string format_trace_line(const TraceEvent &event,
                              const core::SyscallTable &table) {
  std::string out = std::to_string(event.timestamp);
  out += '\t';
  out += event.host_id;
  out += '\t';
  out += std::to_string(event.pid);
  out += '\t';
  out += event.declared_name;
  out += '\t';
  out += table.name(event.syscall);
  return out;
}

TraceReadStats
read_trace(std::istream &in, const core::SyscallTable &table,
           const std::function<void(const TraceEvent &)> &on_event,
           const std::function<void(const ParseError &)> &on_error) {
  TraceReadStats stats;
  std::string line;
  while (std::getline(in, line)) {
    ++stats.lines;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      on_event(parse_trace_line(line, table, stats.lines));
      ++stats.events;
    } catch (const ParseError &e) {
      ++stats.errors;
      if (!on_error)
        throw;
      on_error(e);
    }
  }
  return stats;
}

} // namespace sccv::traceio
