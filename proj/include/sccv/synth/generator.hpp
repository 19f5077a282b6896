// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <functional>

#include "sccv/synth/profile.hpp"

namespace sccv::synth {

using EventSink = std::function<void(const TraceEvent &)>;

/// Streams events for `duration_s` seconds starting at `start`. Per second
/// the event count is Poisson around the active state's rate; timestamps are
/// strictly increasing. Deterministic in `seed`.
void generate_events(const ProcessProfile &profile, double duration_s,
                     const std::string &host_id, std::uint32_t pid,
                     std::uint64_t seed, const EventSink &sink,
                     Nanos start = 0);

std::vector<TraceEvent> generate_events(const ProcessProfile &profile,
                                        double duration_s,
                                        const std::string &host_id,
                                        std::uint32_t pid, std::uint64_t seed,
                                        Nanos start = 0);

} // namespace sccv::synth
