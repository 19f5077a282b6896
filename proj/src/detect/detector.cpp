// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/detect/detector.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

namespace sccv::detect {

void Thresholds::validate() const {
  if (!(tau_low > 0.0 && tau_low <= tau_high && tau_high < 1.0))
    throw Error("thresholds must satisfy 0 < tau_low <= tau_high < 1");
}

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
  case VerdictKind::normal:
    return "normal";
  case VerdictKind::novelty:
    return "novelty";
  case VerdictKind::non_grata:
    return "non_grata";
  case VerdictKind::masquerade:
    return "masquerade";
  }
  return "?";
}

ClassRegistry::ClassRegistry(std::vector<std::string> names, std::set<int> malicious)
    : names_(std::move(names)), malicious_(std::move(malicious)) {
  if (names_.empty())
    throw Error("class registry is empty");
  std::set<std::string> seen;
  for (const auto &n : names_) {
    if (n.empty())
      throw Error("class registry: empty class name");
    if (!seen.insert(n).second)
      throw Error("class registry: duplicate class name '" + n + "'");
  }
  for (int m : malicious_)
    if (m < 0 || static_cast<std::size_t>(m) >= names_.size())
      throw Error("class registry: malicious label " + std::to_string(m) +
                  " out of range");
}

ClassRegistry ClassRegistry::with_malicious_names(
    std::vector<std::string> names, const std::vector<std::string> &malicious) {
  std::set<int> labels;
  for (const auto &m : malicious) {
    auto it = std::find(names.begin(), names.end(), m);
    if (it == names.end())
      throw Error("malicious class '" + m + "' is not a known class");
    labels.insert(static_cast<int>(it - names.begin()));
  }
  return ClassRegistry(std::move(names), std::move(labels));
}

const std::string &ClassRegistry::name(int label) const {
  if (label < 0 || static_cast<std::size_t>(label) >= names_.size())
    throw Error("class label " + std::to_string(label) + " not in registry");
  return names_[static_cast<std::size_t>(label)];
}

WindowInfo WindowInfo::of(const NormalizedSequence &seq) {
  return {seq.host_id, seq.pid, seq.declared_name, seq.window_start,
          seq.window_end};
}

Verdict classify_window(const ml::Prediction &pred, const WindowInfo &window,
                        const ClassRegistry &registry, const Thresholds &thresholds) {
  if (pred.probs.size() != registry.size())
    throw Error("prediction has " + std::to_string(pred.probs.size()) +
                " classes but the registry has " + std::to_string(registry.size()));
  Verdict v;
  v.predicted = pred.predicted;
  v.confidence = pred.confidence;
  v.window = window;
  if (pred.confidence < thresholds.tau_low)
    v.kind = VerdictKind::novelty;
  else if (pred.confidence >= thresholds.tau_high && registry.is_malicious(pred.predicted))
    v.kind = VerdictKind::non_grata;
  else if (pred.confidence >= thresholds.tau_high &&
           registry.name(pred.predicted) != window.declared_name)
    v.kind = VerdictKind::masquerade;
  else
    v.kind = VerdictKind::normal;
  return v;
}

AlertDebouncer::AlertDebouncer(int debounce) : debounce_(debounce) {
  if (debounce_ < 1)
    throw Error("debounce must be >= 1");
}

std::optional<Alert> AlertDebouncer::observe(const Verdict &v) {
  if (v.kind == VerdictKind::normal) {
    kind_ = VerdictKind::normal;
    run_ = 0;
    return std::nullopt;
  }
  if (v.kind != kind_) {
    kind_ = v.kind;
    run_ = 0;
    run_start_ = v.window.window_start;
  }
  if (++run_ != debounce_)
    return std::nullopt;
  return Alert{v.kind,         v.window.host_id,       v.window.pid,
               v.predicted,    v.window.declared_name, v.confidence,
               run_start_,     v.window.window_end};
}

std::vector<Alert> alert_stream(std::span<const Verdict> verdicts, int debounce) {
  std::map<StreamKey, AlertDebouncer> per_process;
  std::vector<Alert> out;
  for (const auto &v : verdicts) {
    auto it = per_process.try_emplace(StreamKey{v.window.host_id, v.window.pid},
                                      debounce)
                  .first;
    if (auto a = it->second.observe(v))
      out.push_back(std::move(*a));
  }
  return out;
}

std::string format_alert(const Alert &alert, const ClassRegistry &registry) {
  nlohmann::ordered_json j;
  j["ts"] = alert.last_window_end;
  j["host"] = alert.host_id;
  j["pid"] = alert.pid;
  j["kind"] = to_string(alert.kind);
  j["predicted"] = registry.name(alert.predicted);
  j["declared"] = alert.declared_name;
  j["confidence"] = alert.confidence;
  j["first_window_start"] = alert.first_window_start;
  j["last_window_end"] = alert.last_window_end;
  return j.dump();
}

} // namespace sccv::detect
