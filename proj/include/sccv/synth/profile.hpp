// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sccv/core/types.hpp"

namespace sccv::synth {

/// One behavioral state: what the process calls and how often.
struct BehaviorState {
  std::vector<double> distribution; // length D, sums to 1
  double rate = 1.0;                // events per second

  bool operator==(const BehaviorState &) const = default;
};

/// Semi-Markov description of a process class. States change on whole
/// seconds; the time spent in a state is geometric with mean `dwell`
/// seconds, after which the next state is drawn from the transition row.
struct ProcessProfile {
  std::string name;
  std::vector<BehaviorState> states;
  std::vector<std::vector<double>> transition;
  double dwell = 1.0;

  std::size_t table_size() const {
    return states.empty() ? 0 : states.front().distribution.size();
  }
  /// Throws Error when an invariant does not hold.
  void validate() const;

  bool operator==(const ProcessProfile &) const = default;
};

/// Deterministic set of `n` profiles (2 <= n <= 64) over a table of size
/// `table_size`. Profiles 0 and 1 form the temporal pair: the same three
/// states visited in opposite cyclic order, so their per-interval count
/// distributions are identical and only the ordering tells them apart.
std::vector<ProcessProfile> builtin_profiles(int n, std::uint64_t seed,
                                             std::size_t table_size = 300);

/// Index pair of the temporal pair inside builtin_profiles().
inline constexpr std::pair<int, int> kTemporalPair{0, 1};

/// Long-run fraction of events per syscall, from the embedded chain's
/// stationary distribution weighted by dwell and rate.
std::vector<double> stationary_syscall_distribution(const ProcessProfile &p);

/// Text document holding any number of profiles; see format_profiles().
std::string format_profiles(const std::vector<ProcessProfile> &profiles);
std::vector<ProcessProfile> parse_profiles(std::string_view text,
                                           std::size_t table_size);

} // namespace sccv::synth
