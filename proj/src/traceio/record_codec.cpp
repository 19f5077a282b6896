// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/traceio/record_codec.hpp"

#include <limits>

namespace sccv::traceio {

namespace {

template <typename T>
void put(std::vector<std::uint8_t> &out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<std::uint8_t>(
        static_cast<std::uint64_t>(value) >> (8 * i)));
}

void put_string(std::vector<std::uint8_t> &out, const std::string &s,
                const char *what) {
  if (s.size() > 255)
    throw FrameError(std::string(what) + " longer than 255 bytes");
  out.push_back(static_cast<std::uint8_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

class Cursor {
public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T> T get() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string get_string() {
    const auto len = get<std::uint8_t>();
    need(len);
    std::string s(reinterpret_cast<const char *>(bytes_.data() + pos_), len);
    pos_ += len;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n)
      throw FrameError("truncated frame");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

} // namespace

void encode_record_into(const CountVector &v, std::vector<std::uint8_t> &out) {
  if (v.counts.size() > 65536)
    throw FrameError("count vector wider than 65536 syscalls");
  std::size_t nonzero = 0;
  for (auto c : v.counts)
    nonzero += c != 0;
  if (nonzero > std::numeric_limits<std::uint16_t>::max())
    throw FrameError("more than 65535 nonzero counts");

  const auto base = out.size();
  put<std::uint32_t>(out, 0); // patched below
  out.push_back(kRecordVersion);
  put_string(out, v.host_id, "host id");
  put_string(out, v.declared_name, "declared name");
  put<std::uint32_t>(out, v.pid);
  put<std::uint64_t>(out, v.interval_start);
  put<std::uint64_t>(out, v.interval_len);
  put<std::uint16_t>(out, static_cast<std::uint16_t>(nonzero));
  for (std::size_t i = 0; i < v.counts.size(); ++i) {
    if (v.counts[i] == 0)
      continue;
    put<std::uint16_t>(out, static_cast<std::uint16_t>(i));
    put<std::uint32_t>(out, v.counts[i]);
  }
  const auto len = static_cast<std::uint32_t>(out.size() - base);
  for (std::size_t i = 0; i < 4; ++i)
    out[base + i] = static_cast<std::uint8_t>(len >> (8 * i));
}

std::vector<std::uint8_t> encode_record(const CountVector &v) {
  std::vector<std::uint8_t> out;
  encode_record_into(v, out);
  return out;
}

std::optional<std::size_t>
peek_frame_length(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes)
    return std::nullopt;
  std::size_t len = 0;
  for (std::size_t i = 0; i < 4; ++i)
    len |= static_cast<std::size_t>(bytes[i]) << (8 * i);
  if (len < kMinFrameBytes || len > kMaxFrameBytes)
    throw FrameError("frame length " + std::to_string(len) + " out of range");
  return len;
}

CountVector decode_record(std::span<const std::uint8_t> frame,
                          std::size_t table_size) {
  const auto declared = peek_frame_length(frame);
  if (!declared || *declared > frame.size())
    throw FrameError("truncated frame");
  if (*declared < frame.size())
    throw FrameError("trailing bytes after frame");

  Cursor cur(frame);
  cur.get<std::uint32_t>();
  const auto version = cur.get<std::uint8_t>();
  if (version != kRecordVersion)
    throw FrameError("unknown record version " + std::to_string(version));

  CountVector v;
  v.host_id = cur.get_string();
  v.declared_name = cur.get_string();
  v.pid = cur.get<std::uint32_t>();
  v.interval_start = cur.get<std::uint64_t>();
  v.interval_len = cur.get<std::uint64_t>();
  if (v.interval_len == 0)
    throw FrameError("zero interval length");
  const auto pairs = cur.get<std::uint16_t>();
  if (cur.remaining() != static_cast<std::size_t>(pairs) * 6)
    throw FrameError(cur.remaining() < static_cast<std::size_t>(pairs) * 6
                         ? "truncated frame"
                         : "frame length inconsistent with pair count");

  v.counts.assign(table_size, 0);
  long previous = -1;
  for (std::uint16_t p = 0; p < pairs; ++p) {
    const auto index = cur.get<std::uint16_t>();
    const auto count = cur.get<std::uint32_t>();
    if (index >= table_size)
      throw FrameError("index out of table (" + std::to_string(index) +
                       " >= " + std::to_string(table_size) + ")");
    if (static_cast<long>(index) <= previous)
      throw FrameError("pairs not strictly ascending");
    if (count == 0)
      throw FrameError("zero count in pair list");
    v.counts[index] = count;
    previous = index;
  }
  return v;
}

void write_records(std::ostream &out, std::span<const CountVector> records) {
  std::vector<std::uint8_t> buf;
  for (const auto &r : records) {
    buf.clear();
    encode_record_into(r, buf);
    out.write(reinterpret_cast<const char *>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
}

RecordReader::RecordReader(std::istream &in, std::size_t table_size)
    : in_(in), table_size_(table_size) {}

std::optional<CountVector> RecordReader::next() {
  buf_.resize(kFrameHeaderBytes);
  in_.read(reinterpret_cast<char *>(buf_.data()), kFrameHeaderBytes);
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got == 0)
    return std::nullopt;
  if (got < kFrameHeaderBytes)
    throw FrameError("truncated frame");
  const auto len = *peek_frame_length(buf_);
  buf_.resize(len);
  in_.read(reinterpret_cast<char *>(buf_.data() + kFrameHeaderBytes),
           static_cast<std::streamsize>(len - kFrameHeaderBytes));
  if (static_cast<std::size_t>(in_.gcount()) != len - kFrameHeaderBytes)
    throw FrameError("truncated frame");
  return decode_record(buf_, table_size_);
}

std::vector<CountVector> read_records(std::istream &in,
                                      std::size_t table_size) {
  RecordReader reader(in, table_size);
  std::vector<CountVector> out;
  while (auto r = reader.next())
    out.push_back(std::move(*r));
  return out;
}

} // namespace sccv::traceio
