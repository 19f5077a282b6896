// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "sccv/core/types.hpp"

namespace sccv::traceio {

// Frame layout, all integers little-endian:
//
//   u32  frame length in bytes, including this field
//   u8   version (kRecordVersion)
//   u8   host id length, then that many bytes
//   u8   declared name length, then that many bytes
//   u32  pid
//   u64  interval start (ns)
//   u64  interval length (ns)
//   u16  pair count
//   pair count x { u16 syscall index, u32 count }   ascending index, count > 0
//
// Record files are plain concatenations of frames.

inline constexpr std::uint8_t kRecordVersion = 1;
inline constexpr std::size_t kFrameHeaderBytes = 4;
inline constexpr std::size_t kMinFrameBytes = 4 + 1 + 1 + 1 + 4 + 8 + 8 + 2;
inline constexpr std::size_t kMaxFrameBytes =
    kMinFrameBytes + 255 + 255 + 65535 * 6;

class FrameError : public Error {
public:
  using Error::Error;
};

/// Appends the frame for `v` to `out`. Zero counts are omitted.
void encode_record_into(const CountVector &v, std::vector<std::uint8_t> &out);
std::vector<std::uint8_t> encode_record(const CountVector &v);

/// Decodes exactly one frame. `frame` must hold the whole frame and nothing
/// else. Throws FrameError on any inconsistency; nothing partial is returned.
CountVector decode_record(std::span<const std::uint8_t> frame,
                          std::size_t table_size);

/// Length declared by the frame prefix, or nullopt with fewer than 4 bytes.
/// Throws FrameError when the declared length is out of range.
std::optional<std::size_t>
peek_frame_length(std::span<const std::uint8_t> bytes);

void write_records(std::ostream &out, std::span<const CountVector> records);

/// Sequential reader over a record file.
class RecordReader {
public:
  RecordReader(std::istream &in, std::size_t table_size);

  /// Next record, or nullopt at a clean end of stream. A partial trailing
  /// frame throws FrameError("truncated frame").
  std::optional<CountVector> next();

private:
  std::istream &in_;
  std::size_t table_size_;
  std::vector<std::uint8_t> buf_;
};

std::vector<CountVector> read_records(std::istream &in, std::size_t table_size);

} // namespace sccv::traceio
