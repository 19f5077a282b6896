// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "sccv/ml/model.hpp"

namespace sccv::ml {

// Checkpoint layout, integers and floats little-endian:
//
//   8 bytes  magic "SCCVCKPT"
//   u32      format version (1)
//   u8       variant (0 simple, 1 bidirectional, 2 inception)
//   u8       merge mode (0 concat, 1 average)
//   u32      D, u32 H, u32 C
//   u32      scale count, then that many u32 scales
//   C times  u16 class-name length, then the UTF-8 bytes
//   f64...   tensors in ModelParams::tensors() order, each row-major
//
// Training hyperparameters are not stored.

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  std::vector<std::string> class_names;
};

void write_checkpoint(std::ostream &out, const Checkpoint &ckpt);
Checkpoint read_checkpoint(std::istream &in);

void save_checkpoint(const std::filesystem::path &path, const Checkpoint &ckpt);
Checkpoint load_checkpoint(const std::filesystem::path &path);

} // namespace sccv::ml
