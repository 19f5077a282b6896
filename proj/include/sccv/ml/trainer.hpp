// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sccv/ml/metrics.hpp"
#include "sccv/ml/model.hpp"

namespace sccv::ml {

struct EpochStats {
  int epoch = 0; // 1-based
  double train_loss = 0.0;
  double val_precision = 0.0;
  double val_recall = 0.0;

  bool operator==(const EpochStats &) const = default;
};

struct TrainResult {
  ModelParams params; // from the best validation epoch
  std::vector<EpochStats> history;
  int best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochStats &)>;

/// Mini-batch training with Adam. Batches are drawn from a permutation
/// seeded by (config.seed, epoch), so a fixed seed reproduces the run bit
/// for bit. The returned parameters are those of the epoch with the best
/// mean of validation macro precision and recall.
TrainResult train(const ModelConfig &config,
                  std::span<const NormalizedSequence> train_set,
                  std::span<const NormalizedSequence> validation_set,
                  const EpochCallback &on_epoch = {});

std::vector<int> predict_classes(const ModelParams &params,
                                 const ModelConfig &config,
                                 std::span<const NormalizedSequence> seqs);

std::vector<int> labels_of(std::span<const NormalizedSequence> seqs);

MacroScores evaluate_model(const ModelParams &params, const ModelConfig &config,
                           std::span<const NormalizedSequence> seqs);

/// Permutation of 0..n-1 used for epoch `epoch`.
std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch);

} // namespace sccv::ml
