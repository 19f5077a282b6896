// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/ml/inference.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>

#include "sccv/core/sequence.hpp"

namespace sccv::ml {

namespace {

using Eigen::Index;

// Sequences per block; the block's gate buffer stays in L1.
constexpr std::size_t kBlock = 16;

// Lane count of the widest float packet; segments are padded to it.
constexpr std::size_t kLanes = 16;

// Sequences sharing each recurrent weight load.
constexpr std::size_t kTile = 4;

using Packet = float __attribute__((vector_size(kLanes * sizeof(float))));

// pre[s] += U h[s] for kTile sequences. Accumulators stay in registers and
// every lane runs the same instructions, so a sequence's result does not
// depend on its neighbours.
void recurrent_tile(const float *u, const float *h, std::size_t H, std::size_t P,
                    std::size_t G, float *pre) {
  // Two chunks per pass keep enough independent FMA chains in flight.
  for (std::size_t r = 0; r < G; r += 2 * kLanes) {
    Packet acc[2][kTile];
    for (std::size_t s = 0; s < kTile; ++s)
      for (std::size_t q = 0; q < 2; ++q)
        acc[q][s] = *reinterpret_cast<const Packet *>(pre + s * G + r + q * kLanes);
    for (std::size_t k = 0; k < H; ++k) {
      const Packet w0 = *reinterpret_cast<const Packet *>(u + k * G + r);
      const Packet w1 = *reinterpret_cast<const Packet *>(u + k * G + r + kLanes);
      for (std::size_t s = 0; s < kTile; ++s) {
        const float hk = h[s * P + k];
        acc[0][s] += hk * w0;
        acc[1][s] += hk * w1;
      }
    }
    for (std::size_t s = 0; s < kTile; ++s)
      for (std::size_t q = 0; q < 2; ++q)
        *reinterpret_cast<Packet *>(pre + s * G + r + q * kLanes) = acc[q][s];
  }
}

// Indices and values of the nonzero entries of x. Rows are mostly zero,
// so all-zero blocks of 8 are skipped with one test.
std::size_t nonzeros(const double *x, std::size_t D, std::size_t *idx, float *val) {
  std::size_t n = 0;
  auto take = [&](std::size_t j) {
    idx[n] = j;
    val[n] = static_cast<float>(x[j]);
    n += x[j] != 0.0;
  };
  std::size_t j = 0;
  for (; j + 8 <= D; j += 8) {
    std::uint64_t any = 0;
    for (std::size_t q = 0; q < 8; ++q) {
      std::uint64_t bits;
      std::memcpy(&bits, x + j + q, sizeof bits);
      any |= bits << 1; // drop the sign so -0.0 reads as zero
    }
    if (any != 0)
      for (std::size_t q = j; q < j + 8; ++q)
        take(q);
  }
  for (; j < D; ++j)
    take(j);
  return n;
}

} // namespace

void BatchPredictor::input_projection(const Lstm &lstm, const std::size_t *idx,
                                      const float *val, std::size_t n, std::size_t G,
                                      float *pre) {
  constexpr std::size_t kPass = 8;
  const std::size_t packets = G / kLanes;
  for (std::size_t first = 0; first < packets; first += kPass) {
    const std::size_t count = std::min(kPass, packets - first);
    const std::size_t r = first * kLanes;
    Packet acc[kPass];
    for (std::size_t q = 0; q < count; ++q)
      acc[q] = *reinterpret_cast<const Packet *>(lstm.bias.data() + r + q * kLanes);
    for (std::size_t i = 0; i < n; ++i) {
      const float *w = lstm.input_cols.data() + idx[i] * G + r;
      for (std::size_t q = 0; q < count; ++q)
        acc[q] += val[i] * *reinterpret_cast<const Packet *>(w + q * kLanes);
    }
    for (std::size_t q = 0; q < count; ++q)
      *reinterpret_cast<Packet *>(pre + r + q * kLanes) = acc[q];
  }
}

BatchPredictor::BatchPredictor(const ModelParams &params, const ModelConfig &config)
    : config_(config), fc_weight_(params.fc_weight), fc_bias_(params.fc_bias) {
  config_.validate();
  const auto H = config_.hidden;
  padded_ = (H + kLanes - 1) / kLanes * kLanes;
  const auto G = 4 * padded_;
  // Gate row g*H+i of the dense tensors lands at g*padded_+i.
  auto pack = [&](const Eigen::MatrixXd &m) {
    Floats out(static_cast<std::size_t>(m.cols()) * G, 0.0f);
    for (Index col = 0; col < m.cols(); ++col)
      for (std::size_t g = 0; g < 4; ++g)
        for (std::size_t i = 0; i < H; ++i)
          out[static_cast<std::size_t>(col) * G + g * padded_ + i] =
              static_cast<float>(m(static_cast<Index>(g * H + i), col));
    return out;
  };
  for (const auto &l : params.lstm) {
    Lstm f;
    f.input_cols = pack(l.input_weights);
    f.recurrent_cols = pack(l.recurrent_weights);
    f.bias = pack(l.bias);
    lstm_.push_back(std::move(f));
  }
}

void BatchPredictor::run_lstm(const Lstm &lstm, std::span<const RowMatrix *const> rows,
                              bool reversed, std::span<float> out) const {
  const auto H = config_.hidden;
  const auto P = padded_;
  const auto G = 4 * P;
  const auto T = rows.empty() ? 0 : static_cast<std::size_t>(rows.front()->rows());
  const auto D = config_.input_dim;
  Floats pre(kBlock * G), h(kBlock * P), c(kBlock * P);
  std::vector<std::size_t> nz(D);
  std::vector<float> xv(D);

  for (std::size_t first = 0; first < rows.size(); first += kBlock) {
    const std::size_t B = std::min(kBlock, rows.size() - first);
    std::fill(h.begin(), h.end(), 0.0f);
    std::fill(c.begin(), c.end(), 0.0f);
    for (std::size_t step = 0; step < T; ++step) {
      const auto t = static_cast<Index>(reversed ? T - 1 - step : step);
      // Bias plus the sparse input projection, per sequence.
      for (std::size_t b = 0; b < B; ++b) {
        const auto n = nonzeros(rows[first + b]->row(t).data(), D, nz.data(), xv.data());
        input_projection(lstm, nz.data(), xv.data(), n, G, pre.data() + b * G);
      }
      // Rows past B hold zero state and are never read back.
      for (std::size_t b = 0; b < B; b += kTile)
        recurrent_tile(lstm.recurrent_cols.data(), h.data() + b * P, H, P, G,
                       pre.data() + b * G);
      for (std::size_t b = 0; b < B; ++b) {
        using Map = Eigen::Map<Eigen::ArrayXf, Eigen::Aligned64>;
        const auto p_ = static_cast<Index>(P);
        Map a(pre.data() + b * G, static_cast<Index>(G));
        a.segment(0, 2 * p_) = 1.0f / (1.0f + (-a.segment(0, 2 * p_)).exp());
        a.segment(3 * p_, p_) = 1.0f / (1.0f + (-a.segment(3 * p_, p_)).exp());
        a.segment(2 * p_, p_) = a.segment(2 * p_, p_).tanh();
        Map cb(c.data() + b * P, p_), hb(h.data() + b * P, p_);
        cb = a.segment(p_, p_) * cb + a.segment(0, p_) * a.segment(2 * p_, p_);
        hb = a.segment(3 * p_, p_) * cb.tanh();
      }
    }
    for (std::size_t b = 0; b < B; ++b)
      std::copy_n(h.begin() + static_cast<std::ptrdiff_t>(b * P), H,
                  out.begin() + static_cast<std::ptrdiff_t>((first + b) * H));
  }
}

std::vector<Prediction>
BatchPredictor::predict(std::span<const NormalizedSequence *const> seqs) const {
  const auto H = config_.hidden;
  for (const auto *s : seqs)
    if (s->width() != config_.input_dim)
      throw Error("sequence width " + std::to_string(s->width()) +
                  " does not match model input dimension " +
                  std::to_string(config_.input_dim));

  // Group by length so each LSTM run sees equal-length inputs.
  std::map<std::size_t, std::vector<std::size_t>> by_length;
  for (std::size_t i = 0; i < seqs.size(); ++i)
    by_length[seqs[i]->length()].push_back(i);

  const auto F = config_.feature_dim();
  std::vector<float> features(seqs.size() * F, 0.0f);
  std::vector<float> states;
  for (const auto &[len, idx] : by_length) {
    std::vector<const RowMatrix *> rows;
    for (auto i : idx)
      rows.push_back(&seqs[i]->rows);
    auto scatter = [&](std::size_t offset) {
      for (std::size_t n = 0; n < idx.size(); ++n)
        std::copy_n(states.begin() + static_cast<std::ptrdiff_t>(n * H), H,
                    features.begin() + static_cast<std::ptrdiff_t>(idx[n] * F + offset));
    };
    states.assign(idx.size() * H, 0.0f);
    switch (config_.variant) {
    case Variant::simple:
      run_lstm(lstm_[0], rows, false, states);
      scatter(0);
      break;
    case Variant::bidirectional:
      run_lstm(lstm_[0], rows, false, states);
      if (config_.merge == MergeMode::concat) {
        scatter(0);
        run_lstm(lstm_[1], rows, true, states);
        scatter(H);
      } else {
        std::vector<float> fwd = states;
        run_lstm(lstm_[1], rows, true, states);
        for (std::size_t i = 0; i < states.size(); ++i)
          states[i] = 0.5f * (fwd[i] + states[i]);
        scatter(0);
      }
      break;
    case Variant::inception:
      for (std::size_t s = 0; s < config_.scales.size(); ++s) {
        std::vector<RowMatrix> scaled;
        scaled.reserve(rows.size());
        for (const auto *r : rows)
          scaled.push_back(core::rescale_rows(*r, config_.scales[s]));
        if (scaled.empty() || scaled.front().rows() == 0)
          continue; // empty branch contributes zero features
        std::vector<const RowMatrix *> ptrs;
        for (const auto &m : scaled)
          ptrs.push_back(&m);
        run_lstm(lstm_[0], ptrs, false, states);
        scatter(s * H);
      }
      break;
    }
  }

  std::vector<Prediction> out;
  out.reserve(seqs.size());
  Eigen::VectorXd f(static_cast<Index>(F));
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    for (std::size_t k = 0; k < F; ++k)
      f(static_cast<Index>(k)) = features[i * F + k];
    out.push_back(Prediction::from_logits(fc_weight_ * f + fc_bias_));
  }
  return out;
}

Prediction BatchPredictor::predict(const NormalizedSequence &seq) const {
  const NormalizedSequence *one = &seq;
  return predict(std::span<const NormalizedSequence *const>(&one, 1)).front();
}

} // namespace sccv::ml
