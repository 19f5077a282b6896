// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <span>

#include "sccv/ml/metrics.hpp"
#include "sccv/ml/model.hpp"

namespace sccv::ml {

/// Multinomial logistic regression on single normalized count vectors.
struct BaselineParams {
  Eigen::MatrixXd weight; // C x D
  Eigen::VectorXd bias;   // C

  static BaselineParams zeros(std::size_t input_dim, std::size_t classes);
  std::vector<Tensor> tensors();
  std::vector<ConstTensor> tensors() const;
  bool operator==(const BaselineParams &) const = default;
};

/// Trains on every row of every labeled window, each row carrying its
/// window's label. Uses the Adam settings, L2 coefficient (on the weight
/// matrix), epochs, batch size and seed of `config`.
BaselineParams train_baseline(const ModelConfig &config,
                              std::span<const NormalizedSequence> train_set);

Prediction baseline_predict(const BaselineParams &params,
                            const Eigen::Ref<const Eigen::RowVectorXd> &row);

/// Majority vote over the per-row predictions of a window.
int baseline_classify(const BaselineParams &params, const NormalizedSequence &seq);

MacroScores evaluate_baseline(const BaselineParams &params,
                              std::span<const NormalizedSequence> seqs,
                              std::size_t classes);

} // namespace sccv::ml
