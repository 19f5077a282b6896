// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sccv/core/types.hpp"

namespace sccv::ml {

enum class Variant : std::uint8_t { simple = 0, bidirectional = 1, inception = 2 };
enum class MergeMode : std::uint8_t { concat = 0, average = 1 };

std::string_view to_string(Variant v);
std::string_view to_string(MergeMode m);
/// Accepts "simple", "bidi"/"bidirectional" and "inception".
Variant parse_variant(std::string_view s);
MergeMode parse_merge(std::string_view s);

struct ModelConfig {
  Variant variant = Variant::simple;
  std::size_t input_dim = 300;
  std::size_t hidden = 64;
  std::size_t classes = 2;
  std::vector<int> scales{1, 2, 3}; // inception only
  MergeMode merge = MergeMode::concat;

  double l2_fc = 1e-4;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 30;
  std::size_t batch = 32;
  std::uint64_t seed = 1;

  /// Throws Error when an invariant does not hold.
  void validate() const;

  /// Number of independent LSTM parameter sets (2 for bidirectional).
  std::size_t lstm_count() const;
  /// Width of the vector fed to the fully-connected layer.
  std::size_t feature_dim() const;
};

/// Gate blocks are stacked in the order input, forget, cell, output; each
/// block has `hidden` rows.
struct LstmParams {
  Eigen::MatrixXd input_weights;     // 4H x D
  Eigen::MatrixXd recurrent_weights; // 4H x H
  Eigen::VectorXd bias;              // 4H
};

struct Tensor {
  std::string name;
  std::span<double> values;
};

struct ConstTensor {
  std::string name;
  std::span<const double> values;
};

struct ModelParams {
  std::vector<LstmParams> lstm; // one set, or forward + backward
  Eigen::MatrixXd fc_weight;    // C x F
  Eigen::VectorXd fc_bias;      // C

  /// All-zero parameters shaped for `config`.
  static ModelParams zeros(const ModelConfig &config);

  /// Every tensor in checkpoint order: per LSTM input weights, recurrent
  /// weights, bias; then fc weight, fc bias.
  std::vector<Tensor> tensors();
  std::vector<ConstTensor> tensors() const;

  std::size_t parameter_count() const;
  bool operator==(const ModelParams &other) const;
};

/// Glorot-uniform weights per gate matrix, forget-gate bias 1, other
/// biases 0. Deterministic in `seed`.
ModelParams init_model(const ModelConfig &config, std::uint64_t seed);

struct Prediction {
  std::vector<double> probs;
  int predicted = 0;
  double confidence = 0.0;

  static Prediction from_logits(const Eigen::VectorXd &logits);
};

/// Pre-softmax scores for one sequence.
Eigen::VectorXd model_logits(const ModelParams &params, const ModelConfig &config,
                             const NormalizedSequence &seq);

/// Class probabilities for one sequence of any length.
Prediction model_forward(const ModelParams &params, const ModelConfig &config,
                         const NormalizedSequence &seq);

struct LossAndGradients {
  double loss = 0.0;          // cross-entropy + L2 penalty
  double cross_entropy = 0.0; // mean over the batch
  ModelParams grads;
};

/// Mean cross-entropy over the batch plus l2_fc * ||fc_weight||^2, with
/// exact gradients by backpropagation through time. All sequences of a
/// batch must have the same length and a label. Throws Error naming the
/// first tensor whose gradient is not finite.
LossAndGradients loss_and_gradients(const ModelParams &params,
                                    const ModelConfig &config,
                                    std::span<const NormalizedSequence *const> batch);
LossAndGradients loss_and_gradients(const ModelParams &params,
                                    const ModelConfig &config,
                                    std::span<const NormalizedSequence> batch);

/// Name of the first tensor holding a NaN or infinity, empty if none.
std::string first_non_finite(const ModelParams &params);

} // namespace sccv::ml
