// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <span>
#include <vector>

#include "sccv/ml/model.hpp"

namespace sccv::ml {

/// Single-precision forward pass over many sequences at once. Every
/// sequence is computed with the same operation order no matter which
/// batch it is in, so results are bit-identical across batchings.
/// Probabilities agree with model_forward() to about 1e-5.
class BatchPredictor {
public:
  BatchPredictor(const ModelParams &params, const ModelConfig &config);

  const ModelConfig &config() const { return config_; }

  /// One Prediction per sequence, in order. Sequences may differ in length.
  std::vector<Prediction> predict(std::span<const NormalizedSequence *const> seqs) const;
  Prediction predict(const NormalizedSequence &seq) const;

private:
  using Floats = std::vector<float, Eigen::aligned_allocator<float>>;

  // Gate blocks are 4 segments of padded_ floats; padding stays zero.
  struct Lstm {
    Floats input_cols;     // D blocks, one per input column
    Floats recurrent_cols; // H blocks
    Floats bias;
  };

  static void input_projection(const Lstm &lstm, const std::size_t *idx, const float *val,
                               std::size_t n, std::size_t G, float *pre);

  // Final hidden states (H floats per sequence) for equal-length inputs.
  void run_lstm(const Lstm &lstm, std::span<const RowMatrix *const> rows, bool reversed,
                std::span<float> out) const;

  ModelConfig config_;
  std::size_t padded_ = 0;
  std::vector<Lstm> lstm_;
  Eigen::MatrixXd fc_weight_;
  Eigen::VectorXd fc_bias_;
};

} // namespace sccv::ml
