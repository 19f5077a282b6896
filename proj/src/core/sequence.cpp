// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/core/sequence.hpp"

namespace sccv::core {

std::vector<double> normalize(const CountVector &v) {
  std::vector<double> out(v.counts.size(), 0.0);
  const auto total = v.total();
  if (total == 0)
    return out;
  const double denom = static_cast<double>(total);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<double>(v.counts[i]) / denom;
  return out;
}

std::vector<CountVector> rescale(std::span<const CountVector> vectors, int k) {
  if (k < 1)
    throw Error("rescale factor must be >= 1, got " + std::to_string(k));
  std::vector<CountVector> out;
  if (vectors.empty())
    return out;
  const auto &first = vectors.front();
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    const auto &v = vectors[i];
    if (v.host_id != first.host_id || v.pid != first.pid ||
        v.interval_len != first.interval_len ||
        v.counts.size() != first.counts.size())
      throw Error("rescale: vectors belong to different streams");
  }
  const auto groups = vectors.size() / static_cast<std::size_t>(k);
  out.reserve(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    CountVector sum = vectors[g * k];
    for (int j = 1; j < k; ++j) {
      const auto &v = vectors[g * k + j];
      for (std::size_t i = 0; i < sum.counts.size(); ++i)
        sum.counts[i] += v.counts[i];
    }
    sum.interval_len = first.interval_len * static_cast<Nanos>(k);
    out.push_back(std::move(sum));
  }
  return out;
}

RowMatrix rescale_rows(const RowMatrix &rows, int k) {
  if (k < 1)
    throw Error("rescale factor must be >= 1, got " + std::to_string(k));
  if (k == 1)
    return rows;
  const Eigen::Index groups = rows.rows() / k;
  RowMatrix out = RowMatrix::Zero(groups, rows.cols());
  for (Eigen::Index g = 0; g < groups; ++g) {
    for (int j = 0; j < k; ++j)
      out.row(g) += rows.row(g * k + j);
    const double s = out.row(g).sum();
    if (s > 0.0)
      out.row(g) /= s;
  }
  return out;
}

SequenceAssembler::SequenceAssembler(std::size_t window, std::size_t stride)
    : window_(window), stride_(stride) {
  if (window_ < 1)
    throw Error("window length must be >= 1");
  if (stride_ < 1 || stride_ > window_)
    throw Error("stride must be in [1, window]");
}

void SequenceAssembler::append(SparseRow row) {
  rows_.push_back(std::move(row));
  if (rows_.size() > window_)
    rows_.pop_front();
  ++since_emit_;
}

std::optional<NormalizedSequence>
SequenceAssembler::push(const CountVector &v) {
  if (v.interval_len == 0)
    throw Error("count vector with zero interval length");
  if (last_start_) {
    if (v.interval_len != interval_len_ || v.counts.size() != width_)
      throw Error("assembler: interval length or width changed mid-stream");
    if (v.interval_start <= *last_start_) {
      ++ignored_;
      return std::nullopt;
    }
    const Nanos missing = (v.interval_start - *last_start_) / interval_len_ - 1;
    const auto fill = static_cast<std::size_t>(
        std::min<Nanos>(missing, static_cast<Nanos>(window_)));
    for (std::size_t i = 0; i < fill; ++i)
      append({});
  } else {
    interval_len_ = v.interval_len;
    width_ = v.counts.size();
  }
  last_start_ = v.interval_start;

  SparseRow row;
  const auto total = v.total();
  if (total > 0) {
    const double denom = static_cast<double>(total);
    for (std::size_t i = 0; i < v.counts.size(); ++i)
      if (v.counts[i] != 0)
        row.emplace_back(static_cast<SyscallIndex>(i),
                         static_cast<double>(v.counts[i]) / denom);
  }
  append(std::move(row));

  if (rows_.size() < window_ || (emitted_ && since_emit_ < stride_))
    return std::nullopt;

  emitted_ = true;
  since_emit_ = 0;
  NormalizedSequence seq;
  seq.rows = RowMatrix::Zero(static_cast<Eigen::Index>(window_),
                             static_cast<Eigen::Index>(width_));
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto &[idx, value] : rows_[r])
      seq.rows(static_cast<Eigen::Index>(r), idx) = value;
  seq.host_id = v.host_id;
  seq.pid = v.pid;
  seq.declared_name = v.declared_name;
  seq.window_end = v.interval_start + v.interval_len;
  seq.window_start = seq.window_end - window_ * v.interval_len;
  return seq;
}

std::vector<NormalizedSequence>
assemble_sequences(std::span<const CountVector> vectors, std::size_t window,
                   std::size_t stride) {
  std::map<StreamKey, SequenceAssembler> assemblers;
  std::vector<NormalizedSequence> out;
  for (const auto &v : vectors) {
    auto it = assemblers.try_emplace(v.key(), window, stride).first;
    if (auto seq = it->second.push(v))
      out.push_back(std::move(*seq));
  }
  return out;
}

} // namespace sccv::core
