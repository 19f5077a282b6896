// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <span>
#include <vector>

#include "sccv/ml/model.hpp"

namespace sccv::ml {

struct AdamSettings {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamSettings from(const ModelConfig &config) {
    return {config.lr, config.beta1, config.beta2, config.epsilon};
  }
};

/// First and second moment accumulators, one vector per parameter tensor.
struct AdamState {
  std::vector<std::vector<double>> first;
  std::vector<std::vector<double>> second;
  std::uint64_t step = 0;

  /// Zeroed state mirroring `params`.
  static AdamState for_tensors(std::span<const ConstTensor> params);
};

/// One Adam update with bias correction. Shapes of params, grads and state
/// must agree.
void adam_step(std::span<const Tensor> params, std::span<const ConstTensor> grads,
               AdamState &state, const AdamSettings &settings);

void adam_step(ModelParams &params, const ModelParams &grads, AdamState &state,
               const ModelConfig &config);

} // namespace sccv::ml
