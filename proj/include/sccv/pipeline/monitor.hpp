// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "sccv/core/sequence.hpp"
#include "sccv/detect/detector.hpp"
#include "sccv/ml/checkpoint.hpp"
#include "sccv/ml/inference.hpp"

namespace sccv::pipeline {

struct MonitorConfig {
  std::size_t window = 10;
  std::size_t stride = 1;
  detect::Thresholds thresholds;
  int debounce = 3;
};

/// Per-process windowing, classification and alerting. The live server and
/// the offline `detect` command both feed records through this class, so
/// the same input yields the same verdicts on either path.
///
/// Single-threaded; state is owned by the caller's thread.
class Monitor {
public:
  Monitor(ml::Checkpoint model, std::vector<std::string> malicious,
          MonitorConfig config);

  struct Output {
    std::vector<detect::Verdict> verdicts;
    std::vector<detect::Alert> alerts;
  };

  /// Routes one record to its process and appends any verdicts and alerts.
  void process(const CountVector &record, Output &out);

  /// Processes records in order and classifies the completed windows
  /// together. Output matches calling process() on each record. Records
  /// whose width does not match the model are skipped; returns how many.
  std::size_t process_batch(std::span<const CountVector> records, Output &out);

  std::size_t processes() const { return streams_.size(); }
  std::uint64_t ignored_records() const { return ignored_; }
  const detect::ClassRegistry &registry() const { return registry_; }
  const ml::Checkpoint &model() const { return model_; }

private:
  struct Stream {
    core::SequenceAssembler assembler;
    detect::AlertDebouncer debouncer;
  };

  Stream &stream_for(const CountVector &record);

  ml::Checkpoint model_;
  ml::BatchPredictor predictor_;
  detect::ClassRegistry registry_;
  MonitorConfig config_;
  std::unordered_map<StreamKey, Stream, StreamKeyHash> streams_;
  std::uint64_t ignored_ = 0;
};

} // namespace sccv::pipeline
