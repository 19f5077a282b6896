// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/synth/dataset.hpp"

#include <cmath>
#include <map>

#include "sccv/core/aggregator.hpp"
#include "sccv/core/sequence.hpp"
#include "sccv/synth/generator.hpp"

namespace sccv::synth {

std::uint64_t class_seed(std::uint64_t seed, std::size_t class_index) {
  // splitmix64 of the pair; distinct classes get unrelated streams.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (class_index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<CountVector>
generate_class_vectors(const ProcessProfile &profile, double seconds,
                       Nanos interval, const std::string &host_id,
                       std::uint32_t pid, std::uint64_t seed, Nanos start) {
  core::Aggregator agg(profile.table_size(), interval);
  std::vector<CountVector> out;
  generate_events(
      profile, seconds, host_id, pid, seed,
      [&](const TraceEvent &e) { agg.add(e, out); }, start);
  agg.flush(out);
  return out;
}

Dataset build_dataset(const std::vector<std::vector<CountVector>> &per_class,
                      std::vector<std::string> class_names, std::size_t window,
                      double train_fraction) {
  if (per_class.size() != class_names.size())
    throw Error("class name count does not match class count");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("train fraction must be in (0, 1)");
  Dataset ds;
  ds.class_names = std::move(class_names);
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    auto windows = core::assemble_sequences(per_class[c], window, window);
    const auto n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(windows.size()) * train_fraction + 1e-9));
    for (std::size_t i = 0; i < windows.size(); ++i) {
      windows[i].label = static_cast<int>(c);
      (i < n_train ? ds.train : ds.test).push_back(std::move(windows[i]));
    }
  }
  return ds;
}

Dataset generate_dataset(std::span<const ProcessProfile> profiles,
                         double seconds_per_class, Nanos interval,
                         std::size_t window, std::uint64_t seed) {
  const double needed = static_cast<double>(window) * 10.0 *
                        static_cast<double>(interval) / 1e9;
  if (seconds_per_class < needed)
    throw Error("insufficient duration: need at least " +
                std::to_string(needed) + " s per class");
  std::vector<std::vector<CountVector>> per_class;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < profiles.size(); ++c) {
    per_class.push_back(generate_class_vectors(
        profiles[c], seconds_per_class, interval, "synth",
        kFirstSyntheticPid + static_cast<std::uint32_t>(c), class_seed(seed, c)));
    names.push_back(profiles[c].name);
  }
  return build_dataset(per_class, std::move(names), window);
}

std::pair<std::vector<NormalizedSequence>, std::vector<NormalizedSequence>>
split_tail(std::span<const NormalizedSequence> windows, double fraction) {
  std::map<int, std::vector<const NormalizedSequence *>> by_class;
  for (const auto &w : windows)
    by_class[w.label.value_or(-1)].push_back(&w);
  std::vector<NormalizedSequence> head, tail;
  for (auto &[label, list] : by_class) {
    const auto n_tail = static_cast<std::size_t>(
        std::ceil(static_cast<double>(list.size()) * fraction - 1e-9));
    const auto n_head = list.size() - std::min(n_tail, list.size());
    for (std::size_t i = 0; i < list.size(); ++i)
      (i < n_head ? head : tail).push_back(*list[i]);
  }
  return {std::move(head), std::move(tail)};
}

} // namespace sccv::synth
