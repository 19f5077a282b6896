// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sccv/ml/model.hpp"

namespace sccv::detect {

struct Thresholds {
  double tau_low = 0.5;  // below: the classifier cannot be relied on
  double tau_high = 0.9; // at or above: the classification is trusted

  void validate() const;
};

enum class VerdictKind : std::uint8_t { normal, novelty, non_grata, masquerade };

std::string_view to_string(VerdictKind kind);

/// Class names in label order plus the labels considered malicious.
class ClassRegistry {
public:
  ClassRegistry(std::vector<std::string> names, std::set<int> malicious = {});

  /// `malicious` given by name; unknown names throw.
  static ClassRegistry with_malicious_names(std::vector<std::string> names,
                                            const std::vector<std::string> &malicious);

  std::size_t size() const { return names_.size(); }
  const std::string &name(int label) const;
  bool is_malicious(int label) const { return malicious_.contains(label); }
  const std::vector<std::string> &names() const { return names_; }
  const std::set<int> &malicious() const { return malicious_; }

private:
  std::vector<std::string> names_;
  std::set<int> malicious_;
};

/// Where a window came from.
struct WindowInfo {
  std::string host_id;
  std::uint32_t pid = 0;
  std::string declared_name;
  Nanos window_start = 0;
  Nanos window_end = 0;

  static WindowInfo of(const NormalizedSequence &seq);

  bool operator==(const WindowInfo &) const = default;
};

struct Verdict {
  VerdictKind kind = VerdictKind::normal;
  int predicted = 0;
  double confidence = 0.0;
  WindowInfo window;

  bool operator==(const Verdict &) const = default;
};

/// Decision table, first matching row wins:
///   1. confidence < tau_low                                -> Novelty
///   2. confidence >= tau_high, predicted class malicious    -> NonGrata
///   3. confidence >= tau_high, predicted name != declared   -> Masquerade
///   4. otherwise                                            -> Normal
Verdict classify_window(const ml::Prediction &pred, const WindowInfo &window,
                        const ClassRegistry &registry, const Thresholds &thresholds);

struct Alert {
  VerdictKind kind = VerdictKind::normal;
  std::string host_id;
  std::uint32_t pid = 0;
  int predicted = 0;
  std::string declared_name;
  double confidence = 0.0; // of the verdict that raised the alert
  Nanos first_window_start = 0;
  Nanos last_window_end = 0;

  bool operator==(const Alert &) const = default;
};

/// Raises an alert when a process produces `debounce` consecutive verdicts
/// of the same non-Normal kind. One alert per run; the run must be broken
/// (by Normal or a different kind) before the same process alerts again.
/// Tracks one process; route verdicts per (host, pid) before calling.
class AlertDebouncer {
public:
  explicit AlertDebouncer(int debounce);

  std::optional<Alert> observe(const Verdict &v);

private:
  int debounce_;
  VerdictKind kind_ = VerdictKind::normal;
  int run_ = 0;
  Nanos run_start_ = 0;
};

/// Routes verdicts by (host, pid) through one debouncer each.
std::vector<Alert> alert_stream(std::span<const Verdict> verdicts, int debounce);

/// One JSON object per line: ts, host, pid, kind, predicted, declared,
/// confidence, first_window_start, last_window_end.
std::string format_alert(const Alert &alert, const ClassRegistry &registry);

} // namespace sccv::detect
