// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/core/syscall_table.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace sccv::core {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

} // namespace

SyscallTable::SyscallTable(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (names_.empty())
    throw Error("syscall table is empty");
  if (names_.size() > std::numeric_limits<SyscallIndex>::max())
    throw Error("syscall table has more than 65535 entries");
  by_name_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty())
      throw Error("syscall table: missing name for index " + std::to_string(i));
    auto [it, inserted] =
        by_name_.emplace(names_[i], static_cast<SyscallIndex>(i));
    if (!inserted)
      throw Error("syscall table: duplicate name '" + names_[i] + "'");
  }
}

SyscallTable SyscallTable::builtin() {
  const auto &src = builtinSyscallNames();
  return SyscallTable(std::vector<std::string>(src.begin(), src.end()));
}

SyscallTable SyscallTable::parse(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#')
      continue;
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos)
      throw Error("syscall table line " + std::to_string(line_no) +
                  ": expected 'index name'");
    const auto idx_text = line.substr(0, sp);
    const auto name = trim(line.substr(sp + 1));
    std::size_t idx = 0;
    auto [p, ec] =
        std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
    if (ec != std::errc{} || p != idx_text.data() + idx_text.size() ||
        name.empty() || name.find_first_of(" \t") != std::string_view::npos)
      throw Error("syscall table line " + std::to_string(line_no) +
                  ": expected 'index name'");
    entries.emplace_back(idx, std::string(name));
  }
  if (entries.empty())
    throw Error("syscall table is empty");

  std::vector<std::string> names(entries.size());
  for (auto &[idx, name] : entries) {
    if (idx >= names.size())
      throw Error("syscall table: gap in indices (index " + std::to_string(idx) +
                  " with only " + std::to_string(entries.size()) + " entries)");
    if (!names[idx].empty())
      throw Error("syscall table: duplicate index " + std::to_string(idx));
    names[idx] = std::move(name);
  }
  return SyscallTable(std::move(names));
}

SyscallTable SyscallTable::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open syscall table '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

SyscallTable SyscallTable::load_or_builtin(const std::string &path) {
  return path.empty() ? builtin() : load(path);
}

std::optional<SyscallIndex> SyscallTable::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end())
    return std::nullopt;
  return it->second;
}

SyscallIndex SyscallTable::index_of(std::string_view name) const {
  return find(name).value_or(reserved_index());
}

std::string SyscallTable::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < names_.size(); ++i)
    out += std::to_string(i) + ' ' + names_[i] + '\n';
  return out;
}

} // namespace sccv::core
