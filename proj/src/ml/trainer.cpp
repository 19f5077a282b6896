// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/ml/trainer.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "sccv/ml/adam.hpp"

namespace sccv::ml {

namespace {

void check_set(const ModelConfig &config, std::span<const NormalizedSequence> set,
               const char *what) {
  if (set.empty())
    throw Error(std::string(what) + " set is empty");
  for (const auto &s : set) {
    if (s.width() != config.input_dim)
      throw Error(std::string(what) + " set: sequence width " +
                  std::to_string(s.width()) + " != model input dimension " +
                  std::to_string(config.input_dim));
    if (!s.label || *s.label < 0 ||
        static_cast<std::size_t>(*s.label) >= config.classes)
      throw Error(std::string(what) + " set: label missing or >= class count");
  }
}

} // namespace

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch)};
  std::mt19937_64 rng(seq);
  // Fisher-Yates with explicit arithmetic so the order does not depend on
  // the standard library's distribution implementation.
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(
        (static_cast<double>(rng() >> 11) * 0x1.0p-53) * static_cast<double>(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::vector<int> predict_classes(const ModelParams &params,
                                 const ModelConfig &config,
                                 std::span<const NormalizedSequence> seqs) {
  std::vector<int> out;
  out.reserve(seqs.size());
  for (const auto &s : seqs)
    out.push_back(model_forward(params, config, s).predicted);
  return out;
}

std::vector<int> labels_of(std::span<const NormalizedSequence> seqs) {
  std::vector<int> out;
  out.reserve(seqs.size());
  for (const auto &s : seqs) {
    if (!s.label)
      throw Error("sequence without label");
    out.push_back(*s.label);
  }
  return out;
}

MacroScores evaluate_model(const ModelParams &params, const ModelConfig &config,
                           std::span<const NormalizedSequence> seqs) {
  return evaluate_macro(predict_classes(params, config, seqs), labels_of(seqs),
                        config.classes);
}

TrainResult train(const ModelConfig &config,
                  std::span<const NormalizedSequence> train_set,
                  std::span<const NormalizedSequence> validation_set,
                  const EpochCallback &on_epoch) {
  config.validate();
  check_set(config, train_set, "training");
  check_set(config, validation_set, "validation");

  auto params = init_model(config, config.seed);
  auto state = AdamState::for_tensors(std::as_const(params).tensors());

  TrainResult result;
  double best_score = -1.0;
  std::vector<const NormalizedSequence *> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto order = epoch_order(train_set.size(), config.seed, epoch);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const auto end = std::min(order.size(), start + config.batch);
      batch.clear();
      for (std::size_t i = start; i < end; ++i)
        batch.push_back(&train_set[order[i]]);
      LossAndGradients lg;
      try {
        lg = loss_and_gradients(params, config, batch);
      } catch (const Error &e) {
        throw Error("training diverged at epoch " + std::to_string(epoch) +
                    ": " + e.what());
      }
      if (!std::isfinite(lg.loss))
        throw Error("training diverged at epoch " + std::to_string(epoch) +
                    ": loss is not finite");
      loss_sum += lg.loss * static_cast<double>(batch.size());
      adam_step(params, lg.grads, state, config);
    }
    if (auto bad = first_non_finite(params); !bad.empty())
      throw Error("training diverged at epoch " + std::to_string(epoch) +
                  ": non-finite values in " + bad);

    const auto scores = evaluate_model(params, config, validation_set);
    EpochStats stats{epoch, loss_sum / static_cast<double>(train_set.size()),
                     scores.precision, scores.recall};
    result.history.push_back(stats);
    if (on_epoch)
      on_epoch(stats);
    const double score = 0.5 * (scores.precision + scores.recall);
    if (score > best_score) {
      best_score = score;
      result.params = params;
      result.best_epoch = epoch;
    }
  }
  return result;
}

} // namespace sccv::ml
