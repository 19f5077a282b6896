// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "sccv/traceio/record_codec.hpp"
#include "sccv/traceio/trace_parser.hpp"

using namespace sccv;
using sccv::testing::make_vector;
using sccv::testing::six_call_table;

namespace {

CountVector random_vector(std::mt19937_64 &rng, std::size_t d) {
  CountVector v;
  const auto host_len = rng() % 40;
  for (std::size_t i = 0; i < host_len; ++i)
    v.host_id.push_back(static_cast<char>('a' + rng() % 26));
  const auto name_len = rng() % 256;
  for (std::size_t i = 0; i < name_len; ++i)
    v.declared_name.push_back(static_cast<char>(rng() % 256));
  v.pid = static_cast<std::uint32_t>(rng());
  v.interval_start = rng();
  v.interval_len = rng() | 1;
  v.counts.assign(d, 0);
  const auto density = rng() % 5;
  for (auto &c : v.counts)
    if (density && rng() % density == 0)
      c = static_cast<std::uint32_t>(rng() % 4 == 0 ? rng() : rng() % 100);
  return v;
}

} // namespace

TEST_CASE("parse_trace_line: well-formed line") {
  const auto table = six_call_table();
  const auto e = traceio::parse_trace_line("1000000000\thostA\t42\tfoo\tread", table);
  CHECK(e.timestamp == 1'000'000'000);
  CHECK(e.host_id == "hostA");
  CHECK(e.pid == 42);
  CHECK(e.declared_name == "foo");
  CHECK(e.syscall == table.index_of("read"));
  CHECK(traceio::format_trace_line(e, table) == "1000000000\thostA\t42\tfoo\tread");
}

TEST_CASE("parse_trace_line: errors carry the line number") {
  const auto table = six_call_table();
  CHECK_THROWS_AS(traceio::parse_trace_line("x\thostA\t42\tfoo\tread", table), traceio::ParseError);
  CHECK_THROWS_AS(traceio::parse_trace_line("1\thostA\tpid\tfoo\tread", table), traceio::ParseError);
  CHECK_THROWS_AS(traceio::parse_trace_line("1\thostA\t42\tfoo", table), traceio::ParseError);
  CHECK_THROWS_AS(traceio::parse_trace_line("1\thostA\t42\tfoo\tread\textra", table),
                  traceio::ParseError);
  CHECK_THROWS_AS(traceio::parse_trace_line("-1\thostA\t42\tfoo\tread", table), traceio::ParseError);
  try {
    traceio::parse_trace_line("x\th\t1\tn\tread", table, 17);
    FAIL("expected ParseError");
  } catch (const traceio::ParseError &e) {
    CHECK(e.line() == 17);
    CHECK(std::string(e.what()).find("line 17") != std::string::npos);
  }
}

TEST_CASE("parse_trace_line: unknown syscall maps to the reserved index") {
  const auto table = six_call_table();
  const auto e = traceio::parse_trace_line("1\thostA\t42\tfoo\tnosuchcall", table);
  CHECK(e.syscall == table.reserved_index());
  CHECK(e.syscall == 5);
}

TEST_CASE("read_trace: skips blank lines and reports bad ones") {
  const auto table = six_call_table();
  std::istringstream in("1\th\t1\tp\tread\n\nbad line\n2\th\t1\tp\twrite\r\n");
  std::vector<TraceEvent> events;
  std::vector<std::size_t> bad;
  const auto stats = traceio::read_trace(
      in, table, [&](const TraceEvent &e) { events.push_back(e); },
      [&](const traceio::ParseError &e) { bad.push_back(e.line()); });
  CHECK(events.size() == 2);
  CHECK(bad == std::vector<std::size_t>{3});
  CHECK(stats.errors == 1);

  std::istringstream again("bad\n");
  CHECK_THROWS_AS(traceio::read_trace(again, table, [](const TraceEvent &) {}),
                  traceio::ParseError);
}

TEST_CASE("parser never crashes on arbitrary input (fuzz)") {
  const auto table = six_call_table();
  std::mt19937_64 rng(99);
  const std::string alphabet = "0123456789\t\t\t-abc \r\n\xff";
  for (int i = 0; i < 20000; ++i) {
    std::string line;
    const auto len = rng() % 40;
    for (std::size_t k = 0; k < len; ++k)
      line.push_back(alphabet[rng() % alphabet.size()]);
    try {
      traceio::parse_trace_line(line, table);
    } catch (const traceio::ParseError &) {
    }
  }
}

TEST_CASE("encode_record: sparse pairs for the worked example vector") {
  const auto v = make_vector({0, 1, 3, 2, 1, 0}, 0, "h", 7, "foo");
  const auto bytes = traceio::encode_record(v);
  // header: 4 len + 1 ver + (1+1) host + (1+3) name + 4 pid + 8 + 8 + 2 count
  const std::size_t header = 4 + 1 + 2 + 4 + 4 + 8 + 8 + 2;
  REQUIRE(bytes.size() == header + 4 * 6);
  CHECK(bytes[0] == bytes.size());
  CHECK(bytes[4] == traceio::kRecordVersion);
  CHECK(bytes[header - 2] == 4); // pair count
  const std::vector<std::pair<int, int>> expected = {{1, 1}, {2, 3}, {3, 2}, {4, 1}};
  for (std::size_t p = 0; p < 4; ++p) {
    const auto *pair = bytes.data() + header + p * 6;
    CHECK(pair[0] + 256 * pair[1] == expected[p].first);
    CHECK(pair[2] == expected[p].second);
  }
  CHECK(traceio::decode_record(bytes, 6) == v);
}

TEST_CASE("encode_record: all-zero vector is a small valid frame") {
  const auto v = make_vector(std::vector<std::uint32_t>(300, 0), 3, "h", 1, "p");
  const auto bytes = traceio::encode_record(v);
  CHECK(bytes.size() < 64);
  CHECK(traceio::decode_record(bytes, 300) == v);
}

TEST_CASE("encode_record: rejects oversized strings") {
  auto v = make_vector({1}, 0);
  v.host_id.assign(256, 'x');
  CHECK_THROWS_AS(traceio::encode_record(v), traceio::FrameError);
}

TEST_CASE("decode_record: error cases") {
  const auto v = make_vector({0, 1, 3, 2, 1, 0}, 0);
  const auto bytes = traceio::encode_record(v);

  SUBCASE("index out of table") {
    auto wide = make_vector(std::vector<std::uint32_t>(20, 0), 0);
    wide.counts[6 + 5] = 9;
    CHECK_THROWS_WITH_AS(traceio::decode_record(traceio::encode_record(wide), 6),
                         doctest::Contains("index out of table"), traceio::FrameError);
  }
  SUBCASE("truncated to half") {
    const std::span<const std::uint8_t> half(bytes.data(), bytes.size() / 2);
    CHECK_THROWS_WITH_AS(traceio::decode_record(half, 6), doctest::Contains("truncated frame"),
                         traceio::FrameError);
  }
  SUBCASE("unknown version") {
    auto b = bytes;
    b[4] = 9;
    CHECK_THROWS_WITH_AS(traceio::decode_record(b, 6), doctest::Contains("version"),
                         traceio::FrameError);
  }
  SUBCASE("unsorted pairs") {
    auto b = bytes;
    const auto first = b.size() - 4 * 6;
    std::swap_ranges(b.begin() + static_cast<long>(first), b.begin() + static_cast<long>(first) + 6,
                     b.begin() + static_cast<long>(first) + 6);
    CHECK_THROWS_WITH_AS(traceio::decode_record(b, 6), doctest::Contains("ascending"),
                         traceio::FrameError);
  }
  SUBCASE("duplicate pair index") {
    auto b = bytes;
    const auto first = b.size() - 4 * 6;
    b[first + 6] = b[first];
    CHECK_THROWS_AS(traceio::decode_record(b, 6), traceio::FrameError);
  }
  SUBCASE("trailing garbage") {
    auto b = bytes;
    b.push_back(0);
    CHECK_THROWS_AS(traceio::decode_record(b, 6), traceio::FrameError);
  }
}

TEST_CASE("codec round-trips random vectors (property)") {
  std::mt19937_64 rng(2026);
  std::vector<std::uint8_t> buf;
  for (int i = 0; i < 10000; ++i) {
    const auto d = 1 + rng() % 400;
    const auto v = random_vector(rng, d);
    buf.clear();
    traceio::encode_record_into(v, buf);
    const auto back = traceio::decode_record(buf, d);
    REQUIRE(back == v);
    REQUIRE(traceio::encode_record(back) == buf);
  }
}

TEST_CASE("decoder never crashes on arbitrary bytes (fuzz)") {
  std::mt19937_64 rng(5);
  const auto valid = traceio::encode_record(make_vector({0, 1, 3, 2, 1, 0}, 0));
  for (int i = 0; i < 20000; ++i) {
    std::vector<std::uint8_t> b;
    if (i % 2) {
      b = valid;
      for (int k = 0; k < 3; ++k)
        b[rng() % b.size()] = static_cast<std::uint8_t>(rng());
    } else {
      b.resize(rng() % 80);
      for (auto &x : b)
        x = static_cast<std::uint8_t>(rng());
    }
    try {
      traceio::decode_record(b, 6);
    } catch (const traceio::FrameError &) {
    }
  }
}

TEST_CASE("record files: concatenated frames, truncation detected") {
  const std::vector<CountVector> vs = {make_vector({0, 1, 3, 2, 1, 0}, 0),
                                       make_vector({1, 0, 1, 2, 0, 1}, 1)};
  std::stringstream ss;
  traceio::write_records(ss, vs);
  const auto all = ss.str();
  std::istringstream in(all);
  CHECK(traceio::read_records(in, 6) == vs);

  std::istringstream cut(all.substr(0, all.size() - 3));
  traceio::RecordReader reader(cut, 6);
  CHECK(reader.next() == vs[0]);
  CHECK_THROWS_WITH_AS(reader.next(), doctest::Contains("truncated"), traceio::FrameError);
}
