// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/core/aggregator.hpp"

#include <numeric>

namespace sccv {

std::uint64_t CountVector::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

} // namespace sccv

namespace sccv::core {

Aggregator::Aggregator(std::size_t table_size, Nanos interval,
                       std::optional<Nanos> tolerance)
    : table_size_(table_size), interval_(interval),
      tolerance_(tolerance.value_or(2 * interval)) {
  if (interval_ == 0)
    throw Error("aggregation interval must be positive");
  if (table_size_ == 0)
    throw Error("syscall table size must be positive");
}

void Aggregator::close_until(StreamState &state, Nanos watermark,
                             std::vector<CountVector> &out) {
  while (!state.open.empty()) {
    auto it = state.open.begin();
    if ((it->first + 1) * interval_ > watermark)
      break;
    out.push_back(std::move(it->second));
    state.open.erase(it);
  }
}

void Aggregator::add(const TraceEvent &event, std::vector<CountVector> &out) {
  if (event.syscall >= table_size_)
    throw Error("syscall index " + std::to_string(event.syscall) +
                " outside table of size " + std::to_string(table_size_));

  auto [it, fresh] = streams_.try_emplace(StreamKey{event.host_id, event.pid});
  auto &state = it->second;
  if (!fresh) {
    if (event.timestamp + tolerance_ < state.newest) {
      ++stats_.rejected_late;
      return;
    }
    if (event.timestamp < state.newest)
      ++stats_.rebinned_late;
  }
  ++stats_.accepted;

  const Nanos bin = event.timestamp / interval_;
  auto [slot, created] = state.open.try_emplace(bin);
  if (created) {
    auto &v = slot->second;
    v.host_id = event.host_id;
    v.pid = event.pid;
    v.declared_name = event.declared_name;
    v.interval_start = bin * interval_;
    v.interval_len = interval_;
    v.counts.assign(table_size_, 0);
  }
  ++slot->second.counts[event.syscall];

  if (fresh || event.timestamp > state.newest) {
    state.newest = event.timestamp;
    if (state.newest >= tolerance_)
      close_until(state, state.newest - tolerance_, out);
  }
}

void Aggregator::advance_to(Nanos now, std::vector<CountVector> &out) {
  if (now < tolerance_)
    return;
  for (auto &[key, state] : streams_)
    close_until(state, now - tolerance_, out);
}

void Aggregator::flush(std::vector<CountVector> &out) {
  for (auto &[key, state] : streams_)
    for (auto &[bin, v] : state.open)
      out.push_back(std::move(v));
  streams_.clear();
}

std::vector<CountVector> aggregate(std::span<const TraceEvent> events,
                                   Nanos interval, std::size_t table_size) {
  Aggregator agg(table_size, interval);
  std::vector<CountVector> out;
  for (const auto &e : events)
    agg.add(e, out);
  agg.flush(out);
  return out;
}

} // namespace sccv::core
