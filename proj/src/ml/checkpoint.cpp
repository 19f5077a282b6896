// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/ml/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace sccv::ml {

namespace {

constexpr char kMagic[8] = {'S', 'C', 'C', 'V', 'C', 'K', 'P', 'T'};

template <typename T> void put(std::ostream &out, T value) {
  std::uint64_t bits;
  if constexpr (std::is_floating_point_v<T>)
    bits = std::bit_cast<std::uint64_t>(static_cast<double>(value));
  else
    bits = static_cast<std::uint64_t>(value);
  char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<char>(bits >> (8 * i));
  out.write(buf, sizeof(T));
}

template <typename T> T get(std::istream &in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char *>(buf), sizeof(T)))
    throw Error("checkpoint truncated");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  if constexpr (std::is_floating_point_v<T>)
    return std::bit_cast<double>(bits);
  else
    return static_cast<T>(bits);
}

// Eigen storage is column-major; the file is row-major.
template <typename Dense> void put_tensor(std::ostream &out, const Dense &m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      put<double>(out, m(r, c));
}

template <typename Dense> void get_tensor(std::istream &in, Dense &m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = get<double>(in);
}

} // namespace

void write_checkpoint(std::ostream &out, const Checkpoint &ckpt) {
  const auto &cfg = ckpt.config;
  cfg.validate();
  if (ckpt.class_names.size() != cfg.classes)
    throw Error("checkpoint: class name count does not match class count");
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(cfg.variant));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(cfg.merge));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.input_dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.hidden));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.classes));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.scales.size()));
  for (int k : cfg.scales)
    put<std::uint32_t>(out, static_cast<std::uint32_t>(k));
  for (const auto &name : ckpt.class_names) {
    if (name.size() > 0xffff)
      throw Error("checkpoint: class name too long");
    put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  const auto &p = ckpt.params;
  if (p.lstm.size() != cfg.lstm_count())
    throw Error("checkpoint: parameters do not match configuration");
  for (const auto &l : p.lstm) {
    put_tensor(out, l.input_weights);
    put_tensor(out, l.recurrent_weights);
    put_tensor(out, l.bias);
  }
  put_tensor(out, p.fc_weight);
  put_tensor(out, p.fc_bias);
  if (!out)
    throw Error("checkpoint: write failed");
}

Checkpoint read_checkpoint(std::istream &in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, 8) != 0)
    throw Error("not a checkpoint file (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw Error("unsupported checkpoint version " + std::to_string(version));

  Checkpoint ckpt;
  auto &cfg = ckpt.config;
  const auto variant = get<std::uint8_t>(in);
  const auto merge = get<std::uint8_t>(in);
  if (variant > 2 || merge > 1)
    throw Error("checkpoint: bad variant or merge mode");
  cfg.variant = static_cast<Variant>(variant);
  cfg.merge = static_cast<MergeMode>(merge);
  cfg.input_dim = get<std::uint32_t>(in);
  cfg.hidden = get<std::uint32_t>(in);
  cfg.classes = get<std::uint32_t>(in);
  const auto n_scales = get<std::uint32_t>(in);
  if (n_scales > 1024)
    throw Error("checkpoint: implausible scale count");
  cfg.scales.clear();
  for (std::uint32_t i = 0; i < n_scales; ++i)
    cfg.scales.push_back(static_cast<int>(get<std::uint32_t>(in)));
  if (cfg.input_dim > 65536 || cfg.hidden > 65536 || cfg.classes > 65536)
    throw Error("checkpoint: implausible dimensions");
  cfg.validate();
  for (std::size_t c = 0; c < cfg.classes; ++c) {
    const auto len = get<std::uint16_t>(in);
    std::string name(len, '\0');
    if (!in.read(name.data(), len))
      throw Error("checkpoint truncated");
    ckpt.class_names.push_back(std::move(name));
  }
  ckpt.params = ModelParams::zeros(cfg);
  for (auto &l : ckpt.params.lstm) {
    get_tensor(in, l.input_weights);
    get_tensor(in, l.recurrent_weights);
    get_tensor(in, l.bias);
  }
  get_tensor(in, ckpt.params.fc_weight);
  get_tensor(in, ckpt.params.fc_bias);
  if (in.peek() != std::char_traits<char>::eof())
    throw Error("checkpoint: trailing bytes");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path &path, const Checkpoint &ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write checkpoint '" + path.string() + "'");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open checkpoint '" + path.string() + "'");
  return read_checkpoint(in);
}

} // namespace sccv::ml
