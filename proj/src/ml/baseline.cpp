// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/ml/baseline.hpp"

#include <cmath>
#include <utility>

#include "sccv/ml/adam.hpp"
#include "sccv/ml/trainer.hpp"

namespace sccv::ml {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

BaselineParams BaselineParams::zeros(std::size_t input_dim, std::size_t classes) {
  return {MatrixXd::Zero(static_cast<Index>(classes), static_cast<Index>(input_dim)),
          VectorXd::Zero(static_cast<Index>(classes))};
}

std::vector<Tensor> BaselineParams::tensors() {
  return {{"weight", {weight.data(), static_cast<std::size_t>(weight.size())}},
          {"bias", {bias.data(), static_cast<std::size_t>(bias.size())}}};
}

std::vector<ConstTensor> BaselineParams::tensors() const {
  return {{"weight", {weight.data(), static_cast<std::size_t>(weight.size())}},
          {"bias", {bias.data(), static_cast<std::size_t>(bias.size())}}};
}

BaselineParams train_baseline(const ModelConfig &config,
                              std::span<const NormalizedSequence> train_set) {
  config.validate();
  if (train_set.empty())
    throw Error("baseline: training set is empty");

  const auto D = static_cast<Index>(config.input_dim);
  const auto C = static_cast<Index>(config.classes);
  std::vector<std::pair<const NormalizedSequence *, Index>> rows;
  for (const auto &s : train_set) {
    if (s.width() != config.input_dim)
      throw Error("baseline: sequence width does not match input dimension");
    if (!s.label || *s.label < 0 || *s.label >= C)
      throw Error("baseline: label missing or >= class count");
    for (Index r = 0; r < s.rows.rows(); ++r)
      rows.emplace_back(&s, r);
  }

  auto params = BaselineParams::zeros(config.input_dim, config.classes);
  auto state = AdamState::for_tensors(std::as_const(params).tensors());
  const auto settings = AdamSettings::from(config);
  auto grads = BaselineParams::zeros(config.input_dim, config.classes);

  MatrixXd x(D, static_cast<Index>(config.batch));
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto order = epoch_order(rows.size(), config.seed, epoch);
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const auto end = std::min(order.size(), start + config.batch);
      const auto B = static_cast<Index>(end - start);
      x.resize(D, B);
      for (Index b = 0; b < B; ++b) {
        const auto &[seq, r] = rows[order[start + static_cast<std::size_t>(b)]];
        x.col(b) = seq->rows.row(r).transpose();
      }
      MatrixXd logits = params.weight * x;
      logits.colwise() += params.bias;
      MatrixXd dlogits(C, B);
      for (Index b = 0; b < B; ++b) {
        const double top = logits.col(b).maxCoeff();
        VectorXd e = (logits.col(b).array() - top).exp().matrix();
        dlogits.col(b) = e / e.sum();
        dlogits(*rows[order[start + static_cast<std::size_t>(b)]].first->label, b) -=
            1.0;
      }
      dlogits /= static_cast<double>(B);
      grads.weight.noalias() = dlogits * x.transpose();
      grads.weight += 2.0 * config.l2_fc * params.weight;
      grads.bias = dlogits.rowwise().sum();
      if (!grads.weight.allFinite() || !grads.bias.allFinite())
        throw Error("baseline training diverged at epoch " + std::to_string(epoch));
      adam_step(params.tensors(), std::as_const(grads).tensors(), state, settings);
    }
  }
  return params;
}

Prediction baseline_predict(const BaselineParams &params,
                            const Eigen::Ref<const Eigen::RowVectorXd> &row) {
  if (row.size() != params.weight.cols())
    throw Error("baseline: row width does not match input dimension");
  return Prediction::from_logits(params.weight * row.transpose() + params.bias);
}

int baseline_classify(const BaselineParams &params, const NormalizedSequence &seq) {
  std::vector<int> votes;
  votes.reserve(seq.length());
  for (Index r = 0; r < seq.rows.rows(); ++r)
    votes.push_back(baseline_predict(params, seq.rows.row(r)).predicted);
  return majority_vote(votes);
}

MacroScores evaluate_baseline(const BaselineParams &params,
                              std::span<const NormalizedSequence> seqs,
                              std::size_t classes) {
  std::vector<int> predicted;
  predicted.reserve(seqs.size());
  for (const auto &s : seqs)
    predicted.push_back(baseline_classify(params, s));
  return evaluate_macro(predicted, labels_of(seqs), classes);
}

} // namespace sccv::ml
