// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sccv::synth {

namespace {

double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t draw(std::mt19937_64 &rng, const std::vector<double> &cdf) {
  const double u = uniform01(rng) * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(it - cdf.begin(),
                               static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

std::vector<double> cumulative(const std::vector<double> &p) {
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  return cdf;
}

// Whole seconds >= 1 with the given mean.
std::uint64_t draw_dwell(std::mt19937_64 &rng, double mean) {
  if (mean <= 1.0)
    return 1;
  const double stay = 1.0 - 1.0 / mean;
  std::uint64_t d = 1;
  while (uniform01(rng) < stay)
    ++d;
  return d;
}

} // namespace

void generate_events(const ProcessProfile &profile, double duration_s,
                     const std::string &host_id, std::uint32_t pid,
                     std::uint64_t seed, const EventSink &sink, Nanos start) {
  profile.validate();
  if (!(duration_s > 0.0))
    return;

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> state_cdf, transition_cdf;
  for (const auto &s : profile.states)
    state_cdf.push_back(cumulative(s.distribution));
  for (const auto &row : profile.transition)
    transition_cdf.push_back(cumulative(row));

  std::size_t state = static_cast<std::size_t>(
      uniform01(rng) * static_cast<double>(profile.states.size()));
  std::uint64_t remaining = draw_dwell(rng, profile.dwell);

  TraceEvent ev;
  ev.host_id = host_id;
  ev.pid = pid;
  ev.declared_name = profile.name;

  const auto whole = static_cast<std::uint64_t>(std::ceil(duration_s));
  std::vector<Nanos> offsets;
  Nanos last = 0;
  bool any = false;
  for (std::uint64_t sec = 0; sec < whole; ++sec) {
    if (remaining == 0) {
      state = draw(rng, transition_cdf[state]);
      remaining = draw_dwell(rng, profile.dwell);
    }
    --remaining;

    const double span = std::min(1.0, duration_s - static_cast<double>(sec));
    const auto span_ns = static_cast<Nanos>(span * 1e9);
    if (span_ns == 0)
      break;
    std::poisson_distribution<std::uint64_t> count_dist(
        profile.states[state].rate * span);
    const auto count = count_dist(rng);

    offsets.resize(count);
    for (auto &o : offsets)
      o = static_cast<Nanos>(uniform01(rng) * static_cast<double>(span_ns));
    std::sort(offsets.begin(), offsets.end());

    const Nanos base = start + sec * kNanosPerSecond;
    for (auto o : offsets) {
      Nanos ts = base + o;
      if (any && ts <= last)
        ts = last + 1;
      ev.timestamp = ts;
      ev.syscall = static_cast<SyscallIndex>(draw(rng, state_cdf[state]));
      sink(ev);
      last = ts;
      any = true;
    }
  }
}

std::vector<TraceEvent> generate_events(const ProcessProfile &profile,
                                        double duration_s,
                                        const std::string &host_id,
                                        std::uint32_t pid, std::uint64_t seed,
                                        Nanos start) {
  std::vector<TraceEvent> out;
  generate_events(
      profile, duration_s, host_id, pid, seed,
      [&](const TraceEvent &e) { out.push_back(e); }, start);
  return out;
}

} // namespace sccv::synth
