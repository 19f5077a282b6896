// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <span>
#include <vector>

#include "sccv/core/types.hpp"

namespace sccv::ml {

/// Most frequent class; ties go to the lowest class index.
int majority_vote(std::span<const int> classes);

struct MacroScores {
  double precision = 0.0;
  double recall = 0.0;
  // confusion[truth][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<double> class_precision;
  std::vector<double> class_recall;
  std::vector<bool> class_present; // class occurs in the truth labels
};

/// Unweighted per-class averages. A class that never occurs in `truth` is
/// left out of both averages; a class that occurs but is never predicted has
/// precision 0.
MacroScores evaluate_macro(std::span<const int> predicted,
                           std::span<const int> truth, std::size_t classes);

} // namespace sccv::ml
