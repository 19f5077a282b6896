// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/ml/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sccv/core/sequence.hpp"

namespace sccv::ml {

using Eigen::ArrayXXd;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(Variant v) {
  switch (v) {
  case Variant::simple:
    return "simple";
  case Variant::bidirectional:
    return "bidi";
  case Variant::inception:
    return "inception";
  }
  return "?";
}

std::string_view to_string(MergeMode m) {
  return m == MergeMode::concat ? "concat" : "average";
}

Variant parse_variant(std::string_view s) {
  if (s == "simple")
    return Variant::simple;
  if (s == "bidi" || s == "bidirectional")
    return Variant::bidirectional;
  if (s == "inception")
    return Variant::inception;
  throw Error("unknown model variant '" + std::string(s) +
              "' (expected simple, bidi or inception)");
}

MergeMode parse_merge(std::string_view s) {
  if (s == "concat")
    return MergeMode::concat;
  if (s == "average")
    return MergeMode::average;
  throw Error("unknown merge mode '" + std::string(s) +
              "' (expected concat or average)");
}

void ModelConfig::validate() const {
  if (input_dim < 1)
    throw Error("model input dimension must be >= 1");
  if (hidden < 1)
    throw Error("hidden units must be >= 1");
  if (classes < 2)
    throw Error("need at least 2 classes");
  if (variant == Variant::inception) {
    if (scales.empty())
      throw Error("inception model needs at least one scale");
    for (int k : scales)
      if (k < 1)
        throw Error("inception scales must be >= 1");
  }
  if (!(l2_fc >= 0.0))
    throw Error("l2 coefficient must be >= 0");
  if (!(lr > 0.0))
    throw Error("learning rate must be positive");
  if (epochs < 1)
    throw Error("epochs must be >= 1");
  if (batch < 1)
    throw Error("batch size must be >= 1");
}

std::size_t ModelConfig::lstm_count() const {
  return variant == Variant::bidirectional ? 2 : 1;
}

std::size_t ModelConfig::feature_dim() const {
  switch (variant) {
  case Variant::simple:
    return hidden;
  case Variant::bidirectional:
    return merge == MergeMode::concat ? 2 * hidden : hidden;
  case Variant::inception:
    return hidden * scales.size();
  }
  return hidden;
}

ModelParams ModelParams::zeros(const ModelConfig &config) {
  config.validate();
  const auto H = static_cast<Index>(config.hidden);
  const auto D = static_cast<Index>(config.input_dim);
  const auto C = static_cast<Index>(config.classes);
  const auto F = static_cast<Index>(config.feature_dim());
  ModelParams p;
  for (std::size_t i = 0; i < config.lstm_count(); ++i)
    p.lstm.push_back({MatrixXd::Zero(4 * H, D), MatrixXd::Zero(4 * H, H),
                      VectorXd::Zero(4 * H)});
  p.fc_weight = MatrixXd::Zero(C, F);
  p.fc_bias = VectorXd::Zero(C);
  return p;
}

namespace {

template <typename Dense> std::span<double> span_of(Dense &m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <typename Dense> std::span<const double> span_of(const Dense &m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

std::string lstm_name(std::size_t i, const char *field) {
  return "lstm" + std::to_string(i) + "." + field;
}

} // namespace

std::vector<Tensor> ModelParams::tensors() {
  std::vector<Tensor> out;
  for (std::size_t i = 0; i < lstm.size(); ++i) {
    out.push_back({lstm_name(i, "input_weights"), span_of(lstm[i].input_weights)});
    out.push_back(
        {lstm_name(i, "recurrent_weights"), span_of(lstm[i].recurrent_weights)});
    out.push_back({lstm_name(i, "bias"), span_of(lstm[i].bias)});
  }
  out.push_back({"fc.weight", span_of(fc_weight)});
  out.push_back({"fc.bias", span_of(fc_bias)});
  return out;
}

std::vector<ConstTensor> ModelParams::tensors() const {
  std::vector<ConstTensor> out;
  for (auto &t : const_cast<ModelParams *>(this)->tensors())
    out.push_back({std::move(t.name), t.values});
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto &t : tensors())
    n += t.values.size();
  return n;
}

bool ModelParams::operator==(const ModelParams &other) const {
  if (lstm.size() != other.lstm.size())
    return false;
  const auto a = tensors();
  const auto b = other.tensors();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::equal(a[i].values.begin(), a[i].values.end(),
                    b[i].values.begin(), b[i].values.end()))
      return false;
  return true;
}

ModelParams init_model(const ModelConfig &config, std::uint64_t seed) {
  auto p = ModelParams::zeros(config);
  std::mt19937_64 rng(seed);
  auto fill = [&](auto block, double fan_in, double fan_out) {
    const double s = std::sqrt(6.0 / (fan_in + fan_out));
    for (Index c = 0; c < block.cols(); ++c)
      for (Index r = 0; r < block.rows(); ++r) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        block(r, c) = (2.0 * u - 1.0) * s;
      }
  };
  const auto H = static_cast<Index>(config.hidden);
  const auto D = static_cast<double>(config.input_dim);
  for (auto &l : p.lstm) {
    for (Index g = 0; g < 4; ++g) {
      fill(l.input_weights.middleRows(g * H, H), D, static_cast<double>(H));
      fill(l.recurrent_weights.middleRows(g * H, H), static_cast<double>(H),
           static_cast<double>(H));
    }
    l.bias.segment(H, H).setOnes();
  }
  fill(p.fc_weight.block(0, 0, p.fc_weight.rows(), p.fc_weight.cols()),
       static_cast<double>(p.fc_weight.cols()),
       static_cast<double>(p.fc_weight.rows()));
  return p;
}

Prediction Prediction::from_logits(const VectorXd &logits) {
  Prediction out;
  const double top = logits.maxCoeff();
  VectorXd e = (logits.array() - top).exp().matrix();
  e /= e.sum();
  out.probs.assign(e.data(), e.data() + e.size());
  out.predicted = static_cast<int>(
      std::max_element(out.probs.begin(), out.probs.end()) - out.probs.begin());
  out.confidence = out.probs[static_cast<std::size_t>(out.predicted)];
  return out;
}

namespace {

template <typename Derived>
ArrayXXd sigmoid(const Eigen::ArrayBase<Derived> &x) {
  return (1.0 + (-x).exp()).inverse();
}

// ---------------------------------------------------------------------------
// Single-sequence inference. Count-vector rows are sparse, so the input
// projection only touches columns of nonzero entries.

// tanh through the vectorized exponential; exact at 0.
template <typename Derived>
auto fast_tanh(const Eigen::ArrayBase<Derived> &x) {
  return 1.0 - 2.0 / ((2.0 * x).exp() + 1.0);
}

VectorXd final_state(const LstmParams &p, const RowMatrix &rows) {
  const Index H = p.recurrent_weights.cols();
  VectorXd h = VectorXd::Zero(H), c = VectorXd::Zero(H), pre(4 * H);
  for (Index t = 0; t < rows.rows(); ++t) {
    pre.noalias() = p.recurrent_weights * h;
    pre += p.bias;
    const double *row = rows.row(t).data();
    for (Index j = 0; j < rows.cols(); ++j)
      if (row[j] != 0.0)
        pre.noalias() += row[j] * p.input_weights.col(j);
    auto a = pre.array();
    a.segment(0, 2 * H) = 1.0 / (1.0 + (-a.segment(0, 2 * H)).exp());
    a.segment(3 * H, H) = 1.0 / (1.0 + (-a.segment(3 * H, H)).exp());
    a.segment(2 * H, H) = fast_tanh(a.segment(2 * H, H));
    c.array() = a.segment(H, H) * c.array() + a.segment(0, H) * a.segment(2 * H, H);
    h.array() = a.segment(3 * H, H) * fast_tanh(c.array());
  }
  return h;
}

void check_input(const ModelConfig &config, const NormalizedSequence &seq) {
  if (seq.width() != config.input_dim)
    throw Error("sequence width " + std::to_string(seq.width()) +
                " does not match model input dimension " +
                std::to_string(config.input_dim));
}

// ---------------------------------------------------------------------------
// Batched training path.

struct LstmTrace {
  std::vector<MatrixXd> gates; // T entries, 4H x B, after activation
  std::vector<MatrixXd> c;     // T + 1 entries, c[0] = 0
  std::vector<MatrixXd> tanh_c;
  std::vector<MatrixXd> h;     // T + 1 entries, h[0] = 0
};

struct Branch {
  std::size_t lstm = 0;
  std::vector<MatrixXd> xs; // T entries, D x B
  LstmTrace trace;
};

void lstm_forward(const LstmParams &p, Branch &br, Index batch) {
  const Index H = p.recurrent_weights.cols();
  const auto T = br.xs.size();
  auto &tr = br.trace;
  tr.c.assign(T + 1, MatrixXd::Zero(H, batch));
  tr.h.assign(T + 1, MatrixXd::Zero(H, batch));
  tr.gates.assign(T, MatrixXd(4 * H, batch));
  tr.tanh_c.assign(T, MatrixXd(H, batch));
  MatrixXd pre(4 * H, batch);
  for (std::size_t t = 0; t < T; ++t) {
    pre.noalias() = p.input_weights * br.xs[t];
    pre.noalias() += p.recurrent_weights * tr.h[t];
    pre.colwise() += p.bias;
    auto &g = tr.gates[t];
    g.topRows(H) = sigmoid(pre.topRows(H).array());
    g.middleRows(H, H) = sigmoid(pre.middleRows(H, H).array());
    g.middleRows(2 * H, H) = pre.middleRows(2 * H, H).array().tanh();
    g.bottomRows(H) = sigmoid(pre.bottomRows(H).array());
    tr.c[t + 1] = (g.middleRows(H, H).array() * tr.c[t].array() +
                   g.topRows(H).array() * g.middleRows(2 * H, H).array())
                      .matrix();
    tr.tanh_c[t] = tr.c[t + 1].array().tanh().matrix();
    tr.h[t + 1] = (g.bottomRows(H).array() * tr.tanh_c[t].array()).matrix();
  }
}

// Accumulates parameter gradients given dLoss/dh at the last step.
void lstm_backward(const LstmParams &p, const Branch &br, MatrixXd dh,
                   LstmParams &grad) {
  const Index H = p.recurrent_weights.cols();
  const Index B = dh.cols();
  const auto &tr = br.trace;
  MatrixXd dc = MatrixXd::Zero(H, B);
  MatrixXd dpre(4 * H, B);
  for (std::size_t t = br.xs.size(); t-- > 0;) {
    const auto &g = tr.gates[t];
    const auto i = g.topRows(H).array();
    const auto f = g.middleRows(H, H).array();
    const auto cand = g.middleRows(2 * H, H).array();
    const auto o = g.bottomRows(H).array();
    const auto tc = tr.tanh_c[t].array();

    dpre.bottomRows(H) = (dh.array() * tc * o * (1.0 - o)).matrix();
    dc.array() += dh.array() * o * (1.0 - tc.square());
    dpre.topRows(H) = (dc.array() * cand * i * (1.0 - i)).matrix();
    dpre.middleRows(H, H) = (dc.array() * tr.c[t].array() * f * (1.0 - f)).matrix();
    dpre.middleRows(2 * H, H) = (dc.array() * i * (1.0 - cand.square())).matrix();
    dc.array() *= f;

    grad.input_weights.noalias() += dpre * br.xs[t].transpose();
    grad.recurrent_weights.noalias() += dpre * tr.h[t].transpose();
    grad.bias += dpre.rowwise().sum();
    dh.noalias() = p.recurrent_weights.transpose() * dpre;
  }
}

// Stacks step t of every sequence as the columns of one D x B matrix.
std::vector<MatrixXd> step_inputs(const std::vector<const RowMatrix *> &seqs,
                                  bool reversed) {
  const Index T = seqs.front()->rows();
  const Index D = seqs.front()->cols();
  const auto B = static_cast<Index>(seqs.size());
  std::vector<MatrixXd> xs(static_cast<std::size_t>(T), MatrixXd(D, B));
  for (Index t = 0; t < T; ++t) {
    const Index src = reversed ? T - 1 - t : t;
    for (Index b = 0; b < B; ++b)
      xs[static_cast<std::size_t>(t)].col(b) =
          seqs[static_cast<std::size_t>(b)]->row(src).transpose();
  }
  return xs;
}

std::vector<Branch> make_branches(const ModelConfig &config,
                                  std::span<const NormalizedSequence *const> batch) {
  std::vector<const RowMatrix *> rows;
  for (const auto *s : batch)
    rows.push_back(&s->rows);
  std::vector<Branch> branches;
  switch (config.variant) {
  case Variant::simple:
    branches.push_back({0, step_inputs(rows, false), {}});
    break;
  case Variant::bidirectional:
    branches.push_back({0, step_inputs(rows, false), {}});
    branches.push_back({1, step_inputs(rows, true), {}});
    break;
  case Variant::inception:
    for (int k : config.scales) {
      std::vector<RowMatrix> scaled;
      scaled.reserve(rows.size());
      for (const auto *r : rows)
        scaled.push_back(core::rescale_rows(*r, k));
      std::vector<const RowMatrix *> ptrs;
      for (const auto &s : scaled)
        ptrs.push_back(&s);
      Branch br;
      br.lstm = 0;
      if (scaled.front().rows() > 0)
        br.xs = step_inputs(ptrs, false);
      branches.push_back(std::move(br));
    }
    break;
  }
  return branches;
}

} // namespace

Eigen::VectorXd model_logits(const ModelParams &params, const ModelConfig &config,
                             const NormalizedSequence &seq) {
  check_input(config, seq);
  const auto H = static_cast<Index>(config.hidden);
  VectorXd features(static_cast<Index>(config.feature_dim()));
  switch (config.variant) {
  case Variant::simple:
    features = final_state(params.lstm[0], seq.rows);
    break;
  case Variant::bidirectional: {
    const RowMatrix reversed = seq.rows.colwise().reverse();
    const VectorXd fwd = final_state(params.lstm[0], seq.rows);
    const VectorXd bwd = final_state(params.lstm[1], reversed);
    if (config.merge == MergeMode::concat)
      features << fwd, bwd;
    else
      features = 0.5 * (fwd + bwd);
    break;
  }
  case Variant::inception:
    for (std::size_t b = 0; b < config.scales.size(); ++b)
      features.segment(static_cast<Index>(b) * H, H) = final_state(
          params.lstm[0], core::rescale_rows(seq.rows, config.scales[b]));
    break;
  }
  return params.fc_weight * features + params.fc_bias;
}

Prediction model_forward(const ModelParams &params, const ModelConfig &config,
                         const NormalizedSequence &seq) {
  return Prediction::from_logits(model_logits(params, config, seq));
}

LossAndGradients loss_and_gradients(const ModelParams &params,
                                    const ModelConfig &config,
                                    std::span<const NormalizedSequence *const> batch) {
  if (batch.empty())
    throw Error("loss_and_gradients: empty batch");
  const auto T = batch.front()->length();
  for (const auto *s : batch) {
    check_input(config, *s);
    if (s->length() != T)
      throw Error("loss_and_gradients: sequences in a batch differ in length");
    if (!s->label || *s->label < 0 ||
        static_cast<std::size_t>(*s->label) >= config.classes)
      throw Error("loss_and_gradients: sequence without a valid label");
  }
  if (T == 0)
    throw Error("loss_and_gradients: empty sequences");

  const auto B = static_cast<Index>(batch.size());
  const auto H = static_cast<Index>(config.hidden);
  auto branches = make_branches(config, batch);
  for (auto &br : branches)
    if (!br.xs.empty())
      lstm_forward(params.lstm[br.lstm], br, B);

  MatrixXd features(static_cast<Index>(config.feature_dim()), B);
  const bool averaged = config.variant == Variant::bidirectional &&
                        config.merge == MergeMode::average;
  if (averaged) {
    features = 0.5 * (branches[0].trace.h.back() + branches[1].trace.h.back());
  } else {
    for (std::size_t b = 0; b < branches.size(); ++b) {
      const auto &tr = branches[b].trace;
      if (tr.h.empty())
        features.middleRows(static_cast<Index>(b) * H, H).setZero();
      else
        features.middleRows(static_cast<Index>(b) * H, H) = tr.h.back();
    }
  }

  MatrixXd logits = params.fc_weight * features;
  logits.colwise() += params.fc_bias;

  LossAndGradients out;
  out.grads = ModelParams::zeros(config);
  MatrixXd dlogits(logits.rows(), B);
  double ce = 0.0;
  for (Index b = 0; b < B; ++b) {
    const double top = logits.col(b).maxCoeff();
    VectorXd e = (logits.col(b).array() - top).exp().matrix();
    const double z = e.sum();
    const auto label = static_cast<Index>(*batch[static_cast<std::size_t>(b)]->label);
    ce -= (logits(label, b) - top) - std::log(z);
    dlogits.col(b) = e / z;
    dlogits(label, b) -= 1.0;
  }
  ce /= static_cast<double>(B);
  dlogits /= static_cast<double>(B);

  out.cross_entropy = ce;
  out.loss = ce + config.l2_fc * params.fc_weight.squaredNorm();

  out.grads.fc_weight.noalias() = dlogits * features.transpose();
  out.grads.fc_weight += 2.0 * config.l2_fc * params.fc_weight;
  out.grads.fc_bias = dlogits.rowwise().sum();
  const MatrixXd dfeatures = params.fc_weight.transpose() * dlogits;

  for (std::size_t b = 0; b < branches.size(); ++b) {
    const auto &br = branches[b];
    if (br.xs.empty())
      continue;
    MatrixXd dh = averaged ? MatrixXd(0.5 * dfeatures)
                           : MatrixXd(dfeatures.middleRows(static_cast<Index>(b) * H, H));
    lstm_backward(params.lstm[br.lstm], br, std::move(dh), out.grads.lstm[br.lstm]);
  }

  if (auto bad = first_non_finite(out.grads); !bad.empty())
    throw Error("non-finite gradient in tensor " + bad);
  return out;
}

LossAndGradients loss_and_gradients(const ModelParams &params,
                                    const ModelConfig &config,
                                    std::span<const NormalizedSequence> batch) {
  std::vector<const NormalizedSequence *> ptrs;
  ptrs.reserve(batch.size());
  for (const auto &s : batch)
    ptrs.push_back(&s);
  return loss_and_gradients(params, config,
                            std::span<const NormalizedSequence *const>(ptrs));
}

std::string first_non_finite(const ModelParams &params) {
  for (const auto &t : params.tensors())
    for (double v : t.values)
      if (!std::isfinite(v))
        return t.name;
  return {};
}

} // namespace sccv::ml
