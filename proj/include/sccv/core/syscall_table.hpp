// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sccv/core/types.hpp"

namespace sccv::core {

/// Names of the shipped default table, index order. The last entry is the
/// reserved "other" bucket.
const std::vector<std::string_view> &builtinSyscallNames();

/// Dense mapping between syscall names and indices 0..D-1.
///
/// The last index (D-1) doubles as the bucket for names that are not in the
/// table, so traces from newer kernels still aggregate.
class SyscallTable {
public:
  /// The default 300-entry x86_64 table.
  static SyscallTable builtin();

  /// Parses "index name" lines. Blank lines and lines starting with '#' are
  /// skipped. Throws Error on duplicates, gaps or an empty table.
  static SyscallTable parse(std::string_view text);
  static SyscallTable load(const std::filesystem::path &path);

  /// `path` empty means the builtin table.
  static SyscallTable load_or_builtin(const std::string &path);

  std::size_t size() const { return names_.size(); }
  const std::string &name(std::size_t index) const { return names_.at(index); }
  std::optional<SyscallIndex> find(std::string_view name) const;

  /// Index of `name`, or the reserved index for unknown names.
  SyscallIndex index_of(std::string_view name) const;
  SyscallIndex reserved_index() const {
    return static_cast<SyscallIndex>(names_.size() - 1);
  }

  /// Text form accepted by parse().
  std::string to_text() const;

private:
  explicit SyscallTable(std::vector<std::string> names);

  std::vector<std::string> names_;
  std::unordered_map<std::string, SyscallIndex> by_name_;
};

} // namespace sccv::core
