// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <deque>
#include <map>
#include <span>
#include <vector>

#include "sccv/core/types.hpp"

namespace sccv::core {

/// L1 normalization. An all-zero vector stays all-zero.
std::vector<double> normalize(const CountVector &v);

/// Sums each run of `k` consecutive vectors into one vector of interval k*t.
/// A trailing run shorter than `k` is dropped. Inputs must be one stream
/// (same host, pid and interval length).
std::vector<CountVector> rescale(std::span<const CountVector> vectors, int k);

/// Same operation on normalized rows: sums groups of `k` rows, drops the
/// remainder, then re-normalizes each row.
RowMatrix rescale_rows(const RowMatrix &rows, int k);

/// Builds windows of W consecutive intervals for a single process.
///
/// Missing intervals between two vectors are filled with all-zero rows. A
/// window is emitted once W rows are buffered and then every `stride` rows;
/// windows are only emitted when their last row is a real vector. Vectors
/// that are not newer than the last one seen are ignored.
class SequenceAssembler {
public:
  SequenceAssembler(std::size_t window, std::size_t stride);

  /// Returns the completed window, if this vector completes one.
  std::optional<NormalizedSequence> push(const CountVector &v);

  std::size_t buffered() const { return rows_.size(); }
  std::uint64_t ignored() const { return ignored_; }

private:
  using SparseRow = std::vector<std::pair<SyscallIndex, double>>;

  void append(SparseRow row);

  std::size_t window_;
  std::size_t stride_;
  std::size_t width_ = 0;
  std::deque<SparseRow> rows_;
  std::size_t since_emit_ = 0;
  bool emitted_ = false;
  std::optional<Nanos> last_start_;
  Nanos interval_len_ = 0;
  std::uint64_t ignored_ = 0;
};

/// Routes a vector stream by (host, pid) and assembles windows per process,
/// in emission order.
std::vector<NormalizedSequence>
assemble_sequences(std::span<const CountVector> vectors, std::size_t window,
                   std::size_t stride);

} // namespace sccv::core
