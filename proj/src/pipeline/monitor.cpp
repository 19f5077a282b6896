// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/pipeline/monitor.hpp"

namespace sccv::pipeline {

Monitor::Monitor(ml::Checkpoint model, std::vector<std::string> malicious,
                 MonitorConfig config)
    : model_(std::move(model)), predictor_(model_.params, model_.config),
      registry_(detect::ClassRegistry::with_malicious_names(model_.class_names,
                                                            malicious)),
      config_(config) {
  config_.thresholds.validate();
  if (config_.debounce < 1)
    throw Error("debounce must be >= 1");
  if (config_.stride < 1 || config_.stride > config_.window)
    throw Error("stride must be in [1, window]");
}

Monitor::Stream &Monitor::stream_for(const CountVector &record) {
  auto it = streams_.find(record.key());
  if (it == streams_.end())
    it = streams_
             .emplace(record.key(),
                      Stream{core::SequenceAssembler(config_.window, config_.stride),
                             detect::AlertDebouncer(config_.debounce)})
             .first;
  return it->second;
}

void Monitor::process(const CountVector &record, Output &out) {
  if (record.counts.size() != model_.config.input_dim)
    throw Error("record width " + std::to_string(record.counts.size()) +
                " does not match model input dimension " +
                std::to_string(model_.config.input_dim));
  process_batch(std::span<const CountVector>(&record, 1), out);
}

std::size_t Monitor::process_batch(std::span<const CountVector> records, Output &out) {
  // Windows are classified in small groups to bound live memory.
  constexpr std::size_t kGroup = 64;
  struct Pending {
    Stream *stream;
    NormalizedSequence seq;
  };
  std::vector<Pending> pending;
  pending.reserve(kGroup);
  std::vector<const NormalizedSequence *> seqs;
  seqs.reserve(kGroup);

  // Streams see their windows in record order, as with process().
  auto flush = [&] {
    seqs.clear();
    for (const auto &p : pending)
      seqs.push_back(&p.seq);
    const auto preds = predictor_.predict(seqs);
    for (std::size_t i = 0; i < pending.size(); ++i) {
      auto verdict = detect::classify_window(
          preds[i], detect::WindowInfo::of(pending[i].seq), registry_, config_.thresholds);
      if (auto alert = pending[i].stream->debouncer.observe(verdict))
        out.alerts.push_back(std::move(*alert));
      out.verdicts.push_back(std::move(verdict));
    }
    pending.clear();
  };

  std::size_t rejected = 0;
  for (const auto &record : records) {
    if (record.counts.size() != model_.config.input_dim) {
      ++rejected;
      continue;
    }
    auto &stream = stream_for(record);
    const auto before = stream.assembler.ignored();
    auto seq = stream.assembler.push(record);
    ignored_ += stream.assembler.ignored() - before;
    if (!seq)
      continue;
    pending.push_back({&stream, std::move(*seq)});
    if (pending.size() == kGroup)
      flush();
  }
  if (!pending.empty())
    flush();
  return rejected;
}

} // namespace sccv::pipeline
