// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#include "sccv/synth/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

namespace sccv::synth {

namespace {

constexpr double kSumTolerance = 1e-9;

double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick(std::mt19937_64 &rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

const std::vector<std::string> &process_names() {
  static const std::vector<std::string> names = {
      "batch_forward",  "batch_reverse",  "postfix_master", "postfix_smtpd",
      "dovecot_imap",   "amavisd",        "clamd",          "spamd",
      "rsyslogd",       "sshd",           "nginx",          "mysqld",
      "redis_server",   "cron",           "journald",       "python_worker",
      "java_app",       "node_app",       "haproxy",        "memcached",
      "postgres",       "dockerd",        "containerd",     "kubelet",
      "chronyd",        "dbus_daemon",    "udevd",          "snmpd",
  };
  return names;
}

std::string name_for(int i) {
  const auto &names = process_names();
  if (static_cast<std::size_t>(i) < names.size())
    return names[static_cast<std::size_t>(i)];
  std::ostringstream ss;
  ss << "proc_" << std::setw(2) << std::setfill('0') << i;
  return ss.str();
}

// Distribution over `support` with random weights in [0.2, 1).
std::vector<double> random_distribution(std::mt19937_64 &rng,
                                        const std::vector<std::size_t> &support,
                                        std::size_t table_size) {
  std::vector<double> d(table_size, 0.0);
  double sum = 0.0;
  for (auto idx : support) {
    const double w = 0.2 + 0.8 * uniform01(rng);
    d[idx] += w;
    sum += w;
  }
  for (auto &x : d)
    x /= sum;
  return d;
}

std::vector<double> mix(const std::vector<double> &a, const std::vector<double> &b,
                        double weight_a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = weight_a * a[i] + (1.0 - weight_a) * b[i];
  const double s = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto &x : out)
    x /= s;
  return out;
}

std::vector<std::size_t> sample_indices(std::mt19937_64 &rng,
                                        const std::vector<std::size_t> &pool,
                                        std::size_t k) {
  std::vector<std::size_t> p = pool;
  for (std::size_t i = 0; i < k && i < p.size(); ++i)
    std::swap(p[i], p[i + pick(rng, p.size() - i)]);
  p.resize(std::min(k, p.size()));
  return p;
}

} // namespace

void ProcessProfile::validate() const {
  if (name.empty())
    throw Error("profile without a name");
  if (states.empty())
    throw Error("profile '" + name + "' has no states");
  if (!(dwell >= 1.0))
    throw Error("profile '" + name + "': dwell must be >= 1 second");
  const auto d = table_size();
  if (d == 0)
    throw Error("profile '" + name + "': empty distribution");
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto &st = states[s];
    if (st.distribution.size() != d)
      throw Error("profile '" + name + "': state distributions differ in size");
    if (!(st.rate > 0.0))
      throw Error("profile '" + name + "': rate must be positive");
    double sum = 0.0;
    for (double x : st.distribution) {
      if (!(x >= 0.0))
        throw Error("profile '" + name + "': negative probability");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
      throw Error("profile '" + name + "': state " + std::to_string(s) +
                  " distribution does not sum to 1");
  }
  if (transition.size() != states.size())
    throw Error("profile '" + name + "': transition matrix has wrong size");
  for (const auto &row : transition) {
    if (row.size() != states.size())
      throw Error("profile '" + name + "': transition matrix has wrong size");
    double sum = 0.0;
    for (double x : row) {
      if (!(x >= 0.0))
        throw Error("profile '" + name + "': negative transition probability");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
      throw Error("profile '" + name + "': transition row does not sum to 1");
  }
}

std::vector<ProcessProfile> builtin_profiles(int n, std::uint64_t seed,
                                             std::size_t table_size) {
  if (n < 2 || n > 64)
    throw Error("profile count must be in [2, 64], got " + std::to_string(n));
  if (table_size < 64)
    throw Error("builtin profiles need a table of at least 64 syscalls");

  std::mt19937_64 rng(seed);
  const std::size_t usable = table_size - 1; // keep the reserved index unused

  // Calls every process makes; the per-state mixture keeps some of this
  // background in every vector so classes are not trivially separable.
  std::vector<std::size_t> pool(usable);
  std::iota(pool.begin(), pool.end(), 0);
  const auto common = sample_indices(rng, pool, 12);
  const auto background = random_distribution(rng, common, table_size);

  std::vector<ProcessProfile> out;
  out.reserve(static_cast<std::size_t>(n));

  // Temporal pair: identical states, opposite cycle direction.
  {
    const double rate = 30.0;
    std::vector<BehaviorState> states;
    for (int s = 0; s < 3; ++s) {
      auto support = sample_indices(rng, pool, 6);
      states.push_back(
          {mix(background, random_distribution(rng, support, table_size), 0.3),
           rate});
    }
    ProcessProfile fwd{name_for(0), states,
                       {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}, 2.0};
    ProcessProfile rev{name_for(1), states,
                       {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}, 2.0};
    out.push_back(std::move(fwd));
    out.push_back(std::move(rev));
  }

  for (int c = 2; c < n; ++c) {
    ProcessProfile p;
    p.name = name_for(c);
    const auto vocab = sample_indices(rng, pool, 14);
    const std::size_t n_states = 2 + pick(rng, 3);
    for (std::size_t s = 0; s < n_states; ++s) {
      auto support = sample_indices(rng, vocab, 5);
      const double weight_bg = 0.3 + 0.3 * uniform01(rng);
      p.states.push_back(
          {mix(background, random_distribution(rng, support, table_size),
               weight_bg),
           8.0 + 40.0 * uniform01(rng)});
    }
    // Borrow one state from the previous class so some per-interval vectors
    // of neighbouring classes look alike.
    if (c > 2) {
      const auto &prev = out.back().states;
      p.states.back() = prev[pick(rng, prev.size())];
    }
    p.transition.assign(n_states, std::vector<double>(n_states, 0.0));
    for (std::size_t i = 0; i < n_states; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n_states; ++j) {
        if (i == j)
          continue;
        p.transition[i][j] = 0.2 + uniform01(rng);
        sum += p.transition[i][j];
      }
      for (auto &x : p.transition[i])
        x /= sum;
    }
    p.dwell = 1.5 + 3.0 * uniform01(rng);
    out.push_back(std::move(p));
  }
  for (const auto &p : out)
    p.validate();
  return out;
}

std::vector<double> stationary_syscall_distribution(const ProcessProfile &p) {
  p.validate();
  const auto n = p.states.size();
  // Power iteration on the lazy chain (I + P) / 2, which has the same
  // stationary distribution and does not oscillate on periodic chains.
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (int it = 0; it < 100000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        next[j] += pi[i] * 0.5 * (p.transition[i][j] + (i == j ? 1.0 : 0.0));
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      delta = std::max(delta, std::abs(next[i] - pi[i]));
    pi.swap(next);
    if (delta < 1e-15)
      break;
  }
  std::vector<double> out(p.table_size(), 0.0);
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double w = pi[s] * p.states[s].rate; // equal dwell for every state
    total += w;
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += w * p.states[s].distribution[i];
  }
  for (auto &x : out)
    x /= total;
  return out;
}

// Document layout, one profile per block:
//
//   profile <name>
//   dwell <seconds>
//   state <rate> <index>:<probability> ...
//   ...
//   transition <row 0 probabilities>
//   transition <row 1 probabilities>
//   end
//
// Indices absent from a state line have probability 0. '#' starts a comment.
std::string format_profiles(const std::vector<ProcessProfile> &profiles) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto &p : profiles) {
    out << "profile " << p.name << '\n' << "dwell " << p.dwell << '\n';
    for (const auto &s : p.states) {
      out << "state " << s.rate;
      for (std::size_t i = 0; i < s.distribution.size(); ++i)
        if (s.distribution[i] != 0.0)
          out << ' ' << i << ':' << s.distribution[i];
      out << '\n';
    }
    for (const auto &row : p.transition) {
      out << "transition";
      for (double x : row)
        out << ' ' << x;
      out << '\n';
    }
    out << "end\n";
  }
  return out.str();
}

std::vector<ProcessProfile> parse_profiles(std::string_view text,
                                           std::size_t table_size) {
  std::vector<ProcessProfile> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  ProcessProfile *cur = nullptr;
  auto fail = [&](const std::string &what) {
    throw Error("profile document line " + std::to_string(line_no) + ": " +
                what);
  };
  auto number = [&](const std::string &tok) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      fail("bad number '" + tok + "'");
    return v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key))
      continue;
    if (key == "profile") {
      if (cur)
        fail("missing 'end' before new profile");
      out.emplace_back();
      cur = &out.back();
      if (!(ls >> cur->name))
        fail("profile without a name");
      continue;
    }
    if (!cur)
      fail("'" + key + "' outside a profile block");
    std::string tok;
    if (key == "dwell") {
      if (!(ls >> tok))
        fail("dwell without a value");
      cur->dwell = number(tok);
    } else if (key == "state") {
      BehaviorState st;
      if (!(ls >> tok))
        fail("state without a rate");
      st.rate = number(tok);
      st.distribution.assign(table_size, 0.0);
      while (ls >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos)
          fail("expected index:probability, got '" + tok + "'");
        const double idx = number(tok.substr(0, colon));
        if (idx < 0 || idx >= static_cast<double>(table_size) ||
            idx != std::floor(idx))
          fail("syscall index out of table: " + tok.substr(0, colon));
        st.distribution[static_cast<std::size_t>(idx)] +=
            number(tok.substr(colon + 1));
      }
      cur->states.push_back(std::move(st));
    } else if (key == "transition") {
      std::vector<double> row;
      while (ls >> tok)
        row.push_back(number(tok));
      cur->transition.push_back(std::move(row));
    } else if (key == "end") {
      cur->validate();
      cur = nullptr;
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (cur)
    throw Error("profile document ends inside profile '" + cur->name + "'");
  return out;
}

} // namespace sccv::synth
