// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <map>
#include <span>
#include <vector>

#include "sccv/core/types.hpp"

namespace sccv::core {

struct AggregatorStats {
  std::uint64_t accepted = 0;
  // Accepted although older than the newest event of the same process.
  std::uint64_t rebinned_late = 0;
  // Dropped because they arrived after their interval was closed.
  std::uint64_t rejected_late = 0;
};

/// Turns per-process event streams into per-interval count vectors.
///
/// Intervals are epoch-aligned and half-open, [n*t, (n+1)*t). An interval of
/// a process is closed once that process has produced an event more than
/// `tolerance` past the interval end; events that arrive later than that are
/// counted in stats().rejected_late and dropped. Only intervals that received
/// at least one event produce a vector.
///
/// Not thread-safe. Separate instances share nothing.
class Aggregator {
public:
  /// `tolerance` defaults to 2 * interval.
  Aggregator(std::size_t table_size, Nanos interval,
             std::optional<Nanos> tolerance = std::nullopt);

  /// Adds one event and appends any vectors it closes to `out`.
  void add(const TraceEvent &event, std::vector<CountVector> &out);

  /// Closes intervals of every process that end at or before
  /// `now - tolerance`. Used by the agent to flush idle processes.
  void advance_to(Nanos now, std::vector<CountVector> &out);

  /// Closes everything, ordered by (host, pid) then interval.
  void flush(std::vector<CountVector> &out);

  const AggregatorStats &stats() const { return stats_; }
  Nanos interval() const { return interval_; }
  std::size_t open_streams() const { return streams_.size(); }

private:
  struct StreamState {
    Nanos newest = 0;
    std::map<Nanos, CountVector> open; // keyed by interval index
  };

  void close_until(StreamState &state, Nanos watermark,
                   std::vector<CountVector> &out);

  std::size_t table_size_;
  Nanos interval_;
  Nanos tolerance_;
  std::map<StreamKey, StreamState> streams_;
  AggregatorStats stats_;
};

/// Aggregates a finite event sequence, flushing at the end.
std::vector<CountVector> aggregate(std::span<const TraceEvent> events,
                                   Nanos interval, std::size_t table_size);

} // namespace sccv::core
