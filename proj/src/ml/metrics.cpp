// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/ml/metrics.hpp"

#include <map>

namespace sccv::ml {

int majority_vote(std::span<const int> classes) {
  if (classes.empty())
    throw Error("majority_vote: empty list");
  std::map<int, std::size_t> freq;
  for (int c : classes)
    ++freq[c];
  int best = freq.begin()->first;
  std::size_t best_n = 0;
  for (auto [c, n] : freq)
    if (n > best_n) {
      best = c;
      best_n = n;
    }
  return best;
}

MacroScores evaluate_macro(std::span<const int> predicted,
                           std::span<const int> truth, std::size_t classes) {
  if (predicted.size() != truth.size())
    throw Error("evaluate_macro: length mismatch");
  if (truth.empty())
    throw Error("evaluate_macro: no labels");
  MacroScores s;
  s.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = truth[i], p = predicted[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= classes ||
        static_cast<std::size_t>(p) >= classes)
      throw Error("evaluate_macro: label outside [0, classes)");
    ++s.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  s.class_precision.assign(classes, 0.0);
  s.class_recall.assign(classes, 0.0);
  s.class_present.assign(classes, false);
  std::size_t present = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    std::size_t row = 0, col = 0;
    for (std::size_t k = 0; k < classes; ++k) {
      row += s.confusion[c][k];
      col += s.confusion[k][c];
    }
    const auto tp = static_cast<double>(s.confusion[c][c]);
    s.class_recall[c] = row ? tp / static_cast<double>(row) : 0.0;
    s.class_precision[c] = col ? tp / static_cast<double>(col) : 0.0;
    if (row == 0)
      continue;
    s.class_present[c] = true;
    ++present;
    s.precision += s.class_precision[c];
    s.recall += s.class_recall[c];
  }
  s.precision /= static_cast<double>(present);
  s.recall /= static_cast<double>(present);
  return s;
}

} // namespace sccv::ml
