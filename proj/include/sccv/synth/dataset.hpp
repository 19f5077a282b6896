// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <span>

#include "sccv/synth/profile.hpp"

namespace sccv::synth {

/// Labeled windows split into train and test. Both lists hold each class's
/// windows in time order, classes in label order.
struct Dataset {
  std::vector<std::string> class_names;
  std::vector<NormalizedSequence> train;
  std::vector<NormalizedSequence> test;
};

inline constexpr double kTrainFraction = 0.8;
/// Share of each class's training windows held out for epoch selection.
inline constexpr double kValidationFraction = 0.125;
/// Simulated seconds per class of the default dataset (500 windows at W=10, t=1 s).
inline constexpr double kDefaultSecondsPerClass = 5000.0;
inline constexpr std::uint32_t kFirstSyntheticPid = 1000;
inline constexpr Nanos kSyntheticEpoch = 1'700'000'000ULL * kNanosPerSecond;

/// Count vectors of one synthetic process: events generated from `profile`
/// then aggregated at `interval`.
std::vector<CountVector>
generate_class_vectors(const ProcessProfile &profile, double seconds,
                       Nanos interval, const std::string &host_id,
                       std::uint32_t pid, std::uint64_t seed,
                       Nanos start = kSyntheticEpoch);

/// Tumbling windows of length `window` per class, split by time block: the
/// first `train_fraction` of every class's windows go to train, the rest to
/// test. `per_class[i]` holds the vectors of class i.
Dataset build_dataset(const std::vector<std::vector<CountVector>> &per_class,
                      std::vector<std::string> class_names, std::size_t window,
                      double train_fraction = kTrainFraction);

/// Generates every profile for `seconds_per_class` seconds and builds the
/// split dataset. Requires seconds_per_class >= 10 * window * interval.
Dataset generate_dataset(std::span<const ProcessProfile> profiles,
                         double seconds_per_class, Nanos interval,
                         std::size_t window, std::uint64_t seed);

/// Splits each class's time-ordered windows, keeping the trailing `fraction`
/// as the second list. Used to carve a validation block out of train.
std::pair<std::vector<NormalizedSequence>, std::vector<NormalizedSequence>>
split_tail(std::span<const NormalizedSequence> windows, double fraction);

/// Per-class seed used by generate_dataset().
std::uint64_t class_seed(std::uint64_t seed, std::size_t class_index);

} // namespace sccv::synth
