// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/ml/adam.hpp"

#include <cmath>

namespace sccv::ml {

AdamState AdamState::for_tensors(std::span<const ConstTensor> params) {
  AdamState s;
  for (const auto &t : params) {
    s.first.emplace_back(t.values.size(), 0.0);
    s.second.emplace_back(t.values.size(), 0.0);
  }
  return s;
}

void adam_step(std::span<const Tensor> params, std::span<const ConstTensor> grads,
               AdamState &state, const AdamSettings &settings) {
  if (params.size() != grads.size() || params.size() != state.first.size())
    throw Error("adam_step: tensor count mismatch");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(settings.beta1, t);
  const double correct2 = 1.0 - std::pow(settings.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k].values;
    auto g = grads[k].values;
    auto &m = state.first[k];
    auto &v = state.second[k];
    if (p.size() != g.size() || p.size() != m.size())
      throw Error("adam_step: shape mismatch in tensor " + params[k].name);
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = settings.beta1 * m[i] + (1.0 - settings.beta1) * g[i];
      v[i] = settings.beta2 * v[i] + (1.0 - settings.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correct1;
      const double v_hat = v[i] / correct2;
      p[i] -= settings.lr * m_hat / (std::sqrt(v_hat) + settings.epsilon);
    }
  }
}

void adam_step(ModelParams &params, const ModelParams &grads, AdamState &state,
               const ModelConfig &config) {
  const auto p = params.tensors();
  const auto g = grads.tensors();
  adam_step(p, g, state, AdamSettings::from(config));
}

} // namespace sccv::ml
