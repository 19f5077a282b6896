// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

// sccv: command-line front end.

#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sccv/core/aggregator.hpp"
#include "sccv/core/sequence.hpp"
#include "sccv/core/syscall_table.hpp"
#include "sccv/ml/baseline.hpp"
#include "sccv/ml/checkpoint.hpp"
#include "sccv/ml/trainer.hpp"
#include "sccv/pipeline/agent.hpp"
#include "sccv/pipeline/monitor.hpp"
#include "sccv/pipeline/server.hpp"
#include "sccv/synth/dataset.hpp"
#include "sccv/synth/generator.hpp"
#include "sccv/synth/profile.hpp"
#include "sccv/traceio/record_codec.hpp"
#include "sccv/traceio/trace_parser.hpp"

namespace fs = std::filesystem;
using namespace sccv;

namespace {

constexpr const char *kClassesFile = "classes.txt";
constexpr const char *kProfilesFile = "profiles.txt";
constexpr const char *kRecordsFile = "data.records";

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

Nanos seconds_to_nanos(double s) {
  if (!(s > 0))
    throw Error("interval must be positive");
  return static_cast<Nanos>(std::llround(s * 1e9));
}

std::vector<std::string> read_lines(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open '" + path.string() + "'");
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty())
      out.push_back(line);
  return out;
}

std::string join(const std::vector<std::string> &items, const char *sep = ",") {
  std::string out;
  for (const auto &s : items) {
    if (!out.empty())
      out += sep;
    out += s;
  }
  return out;
}

std::string join(const std::vector<int> &items) {
  std::vector<std::string> s;
  for (int x : items)
    s.push_back(std::to_string(x));
  return join(s);
}

void echo(const std::string &command, const std::vector<std::pair<std::string, std::string>> &kv) {
  std::string line = command + ":";
  for (const auto &[k, v] : kv)
    line += " " + k + "=" + v;
  spdlog::info("config {}", line);
}

// Shared flag groups ---------------------------------------------------------

struct TableOpt {
  std::string path;
  void add(CLI::App &app) {
    app.add_option("--table", path, "Syscall table file (index name per line); builtin if empty");
  }
  core::SyscallTable load() const { return core::SyscallTable::load_or_builtin(path); }
  std::string shown() const { return path.empty() ? "builtin" : path; }
};

struct ModelOpts {
  std::string model = "simple";
  std::size_t hidden = 64;
  std::vector<int> scales{1, 2, 3};
  std::string merge = "concat";
  double lr = 1e-3;
  double l2 = 1e-4;
  int epochs = 30;
  std::size_t batch = 32;
  std::uint64_t seed = 1;

  void add(CLI::App &app, bool with_model = true) {
    if (with_model)
      app.add_option("--model", model, "Network: simple, bidi or inception")
          ->check(CLI::IsMember({"simple", "bidi", "bidirectional", "inception"}));
    app.add_option("--hidden", hidden, "LSTM hidden units")->check(CLI::PositiveNumber);
    app.add_option("--scales", scales, "Inception time scales")->delimiter(',');
    app.add_option("--merge", merge, "Bidirectional merge: concat or average")
        ->check(CLI::IsMember({"concat", "average"}));
    app.add_option("--lr", lr, "Adam learning rate");
    app.add_option("--l2", l2, "L2 coefficient on the readout weights");
    app.add_option("--epochs", epochs, "Training epochs")->check(CLI::PositiveNumber);
    app.add_option("--batch", batch, "Mini-batch size")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Random seed");
  }

  ml::ModelConfig config(std::size_t d, std::size_t c) const {
    ml::ModelConfig cfg;
    cfg.variant = ml::parse_variant(model);
    cfg.input_dim = d;
    cfg.classes = c;
    cfg.hidden = hidden;
    cfg.scales = scales;
    cfg.merge = ml::parse_merge(merge);
    cfg.lr = lr;
    cfg.l2_fc = l2;
    cfg.epochs = epochs;
    cfg.batch = batch;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }

  std::vector<std::pair<std::string, std::string>> shown() const {
    return {{"model", model},         {"hidden", std::to_string(hidden)},
            {"scales", join(scales)}, {"merge", merge},
            {"lr", fmt::format("{}", lr)}, {"l2", fmt::format("{}", l2)},
            {"epochs", std::to_string(epochs)}, {"batch", std::to_string(batch)},
            {"seed", std::to_string(seed)}};
  }
};

struct DetectOpts {
  std::size_t window = 10;
  std::size_t stride = 1;
  double tau_low = 0.5;
  double tau_high = 0.9;
  std::vector<std::string> malicious;
  int debounce = 3;

  void add(CLI::App &app) {
    app.add_option("--window", window, "Vectors per classified window")->check(CLI::PositiveNumber);
    app.add_option("--stride", stride, "Vectors between classified windows")
        ->check(CLI::PositiveNumber);
    app.add_option("--tau-low", tau_low, "Confidence below which a window is a novelty");
    app.add_option("--tau-high", tau_high, "Confidence at which a classification is trusted");
    app.add_option("--malicious", malicious, "Class names treated as malicious")->delimiter(',');
    app.add_option("--debounce", debounce, "Consecutive verdicts needed for an alert")
        ->check(CLI::PositiveNumber);
  }

  pipeline::MonitorConfig monitor() const {
    pipeline::MonitorConfig m;
    m.window = window;
    m.stride = stride;
    m.thresholds = {tau_low, tau_high};
    m.thresholds.validate();
    m.debounce = debounce;
    return m;
  }

  std::vector<std::pair<std::string, std::string>> shown() const {
    return {{"window", std::to_string(window)},
            {"stride", std::to_string(stride)},
            {"tau-low", fmt::format("{}", tau_low)},
            {"tau-high", fmt::format("{}", tau_high)},
            {"malicious", join(malicious)},
            {"debounce", std::to_string(debounce)}};
  }
};

ml::Checkpoint load_model_for(const std::string &path, const core::SyscallTable &table) {
  auto ck = ml::load_checkpoint(path);
  if (ck.config.input_dim != table.size())
    throw Error(fmt::format("model '{}' expects {} syscalls but the table has {}; pass the "
                            "--table used for training",
                            path, ck.config.input_dim, table.size()));
  return ck;
}

// Dataset directory ----------------------------------------------------------

struct LoadedData {
  std::vector<std::string> class_names;
  synth::Dataset dataset;
};

LoadedData load_dataset(const fs::path &dir, const core::SyscallTable &table, std::size_t window) {
  LoadedData out;
  out.class_names = read_lines(dir / kClassesFile);
  std::map<std::string, std::size_t> label;
  for (std::size_t i = 0; i < out.class_names.size(); ++i)
    label[out.class_names[i]] = i;
  std::ifstream in(dir / kRecordsFile, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + (dir / kRecordsFile).string() + "'; run 'sccv gen' first");
  std::vector<std::vector<CountVector>> per_class(out.class_names.size());
  traceio::RecordReader reader(in, table.size());
  while (auto v = reader.next()) {
    const auto it = label.find(v->declared_name);
    if (it == label.end())
      throw Error("record for unknown class '" + v->declared_name + "' in " +
                  (dir / kRecordsFile).string());
    per_class[it->second].push_back(std::move(*v));
  }
  out.dataset = synth::build_dataset(per_class, out.class_names, window);
  return out;
}

// Subcommands ----------------------------------------------------------------

struct GenCmd {
  TableOpt table;
  int classes = 10;
  double seconds = synth::kDefaultSecondsPerClass;
  double interval_secs = 1.0;
  std::size_t window = 10;
  std::uint64_t seed = 7;
  std::string profiles;
  std::string out = "data";

  void add(CLI::App &root) {
    auto *app = root.add_subcommand("gen", "Generate a labeled synthetic dataset");
    table.add(*app);
    app->add_option("--classes", classes, "Number of process classes (2-64)");
    app->add_option("--seconds", seconds, "Simulated seconds per class");
    app->add_option("--interval-secs", interval_secs, "Aggregation interval t in seconds");
    app->add_option("--window", window, "Window length the data must support");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--profiles", profiles, "Profile document to use instead of the builtin set");
    app->add_option("-o,--out", out, "Output directory");
    app->callback([this] { run(); });
  }

  void run() {
    echo("gen", {{"table", table.shown()},
                 {"classes", std::to_string(classes)},
                 {"seconds", fmt::format("{}", seconds)},
                 {"interval-secs", fmt::format("{}", interval_secs)},
                 {"window", std::to_string(window)},
                 {"seed", std::to_string(seed)},
                 {"profiles", profiles.empty() ? "builtin" : profiles},
                 {"out", out}});
    const auto t = table.load();
    const auto interval = seconds_to_nanos(interval_secs);
    std::vector<synth::ProcessProfile> ps;
    if (profiles.empty()) {
      ps = synth::builtin_profiles(classes, seed, t.size());
    } else {
      std::ifstream in(profiles);
      if (!in)
        throw Error("cannot open profiles '" + profiles + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      ps = synth::parse_profiles(ss.str(), t.size());
    }
    if (seconds < 10.0 * static_cast<double>(window) * interval_secs)
      throw Error(fmt::format("--seconds must be at least 10 * window * interval ({})",
                              10.0 * static_cast<double>(window) * interval_secs));
    fs::create_directories(out);
    std::ofstream names(fs::path(out) / kClassesFile);
    std::ofstream prof(fs::path(out) / kProfilesFile);
    std::ofstream records(fs::path(out) / kRecordsFile, std::ios::binary);
    prof << synth::format_profiles(ps);
    std::size_t total = 0;
    for (std::size_t c = 0; c < ps.size(); ++c) {
      names << ps[c].name << '\n';
      const auto vs = synth::generate_class_vectors(
          ps[c], seconds, interval, "synth",
          synth::kFirstSyntheticPid + static_cast<std::uint32_t>(c), synth::class_seed(seed, c));
      traceio::write_records(records, vs);
      total += vs.size();
      spdlog::debug("class {} ({}): {} vectors", c, ps[c].name, vs.size());
    }
    if (!records)
      throw Error("failed writing " + (fs::path(out) / kRecordsFile).string());
    std::cout << fmt::format("wrote {} classes, {} count vectors to {}\n", ps.size(), total, out);
  }
};

struct AggregateCmd {
  TableOpt table;
  double interval_secs = 1.0;
  std::string input = "-";
  std::string out;
  bool text = false;

  void add(CLI::App &root) {
    auto *app = root.add_subcommand("aggregate", "Turn a syscall trace into count-vector records");
    table.add(*app);
    app->add_option("--interval-secs", interval_secs, "Aggregation interval t in seconds");
    app->add_option("input", input, "Trace file (timestamp_ns host pid name syscall, tab separated); - for stdin");
    app->add_option("-o,--out", out, "Record file to write; prints text when omitted");
    app->add_flag("--text", text, "Print one line per count vector");
    app->callback([this] { run(); });
  }

  void run() {
    echo("aggregate", {{"table", table.shown()},
                       {"interval-secs", fmt::format("{}", interval_secs)},
                       {"input", input},
                       {"out", out.empty() ? "-" : out}});
    const auto t = table.load();
    core::Aggregator agg(t.size(), seconds_to_nanos(interval_secs));
    std::vector<CountVector> vs;
    std::ifstream file;
    std::istream *in = &std::cin;
    if (input != "-") {
      file.open(input);
      if (!file)
        throw Error("cannot open trace '" + input + "'");
      in = &file;
    }
    const auto stats = traceio::read_trace(
        *in, t, [&](const TraceEvent &e) { agg.add(e, vs); },
        [](const traceio::ParseError &e) { spdlog::warn("trace {}", e.what()); });
    agg.flush(vs);
    spdlog::info("{} events, {} parse errors, {} late rejected, {} vectors", stats.events,
                 stats.errors, agg.stats().rejected_late, vs.size());
    if (!out.empty()) {
      std::ofstream o(out, std::ios::binary);
      traceio::write_records(o, vs);
      if (!o)
        throw Error("failed writing '" + out + "'");
    }
    if (out.empty() || text) {
      for (const auto &v : vs) {
        std::vector<std::string> counts;
        std::vector<std::string> fractions;
        const auto norm = core::normalize(v);
        for (std::size_t i = 0; i < v.counts.size(); ++i) {
          counts.push_back(std::to_string(v.counts[i]));
          fractions.push_back(fmt::format("{:.3f}", norm[i]));
        }
        std::cout << fmt::format("{}\t{}\t{}\t{}\t[{}]\t[{}]\n", v.interval_start, v.host_id,
                                 v.pid, v.declared_name, join(counts),
                                 t.size() <= 32 ? join(fractions) : std::string("..."));
      }
    }
  }
};

struct TrainCmd {
  TableOpt table;
  ModelOpts model;
  std::size_t window = 10;
  std::string data = "data";
  std::string out = "model.ckpt";

  void add(CLI::App &root) {
    auto *app = root.add_subcommand("train", "Train a sequence classifier");
    table.add(*app);
    model.add(*app);
    app->add_option("--window", window, "Vectors per training window")->check(CLI::PositiveNumber);
    app->add_option("--data", data, "Dataset directory written by 'sccv gen'");
    app->add_option("-o,--out", out, "Checkpoint to write");
    app->callback([this] { run(); });
  }

  void run() {
    auto kv = model.shown();
    kv.insert(kv.begin(), {{"table", table.shown()}, {"data", data}, {"window", std::to_string(window)}});
    kv.push_back({"out", out});
    echo("train", kv);
    const auto t = table.load();
    const auto loaded = load_dataset(data, t, window);
    const auto cfg = model.config(t.size(), loaded.class_names.size());
    const auto [train_set, val_set] =
        synth::split_tail(loaded.dataset.train, synth::kValidationFraction);
    spdlog::info("{} train, {} validation, {} test windows", train_set.size(), val_set.size(),
                 loaded.dataset.test.size());
    const auto result = ml::train(cfg, train_set, val_set, [](const ml::EpochStats &s) {
      spdlog::info("epoch {:3d} loss {:.5f} val precision {:.4f} recall {:.4f}", s.epoch,
                   s.train_loss, s.val_precision, s.val_recall);
    });
    ml::save_checkpoint(out, {cfg, result.params, loaded.class_names});
    const auto test = ml::evaluate_model(result.params, cfg, loaded.dataset.test);
    std::cout << fmt::format("{:<20} {:>9} {:>9}\n", "class", "precision", "recall");
    for (std::size_t c = 0; c < loaded.class_names.size(); ++c)
      if (test.class_present[c])
        std::cout << fmt::format("{:<20} {:>9.3f} {:>9.3f}\n", loaded.class_names[c],
                                 test.class_precision[c], test.class_recall[c]);
    std::cout << fmt::format("best epoch {}; test macro precision {:.3f} recall {:.3f}; saved {}\n",
                             result.best_epoch, test.precision, test.recall, out);
  }
};

struct EvalCmd {
  TableOpt table;
  ModelOpts model;
  std::size_t window = 10;
  std::string data = "data";
  int runs = 1;
  std::vector<std::string> models{"logistic", "simple", "bidi", "inception"};

  void add(CLI::App &root) {
    auto *app = root.add_subcommand("eval", "Train and score every model; prints a results table");
    table.add(*app);
    model.add(*app, false);
    app->add_option("--window", window, "Vectors per window")->check(CLI::PositiveNumber);
    app->add_option("--data", data, "Dataset directory written by 'sccv gen'");
    app->add_option("--runs", runs, "Training runs per model (seeds seed..seed+runs-1)")
        ->check(CLI::PositiveNumber);
    app->add_option("--models", models, "Models to score")
        ->delimiter(',')
        ->check(CLI::IsMember({"logistic", "simple", "bidi", "inception"}));
    app->callback([this] { run(); });
  }

  static std::string cell(const std::vector<double> &xs) {
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() < 2)
      return fmt::format("{:.3f}", mean);
    double var = 0;
    for (double x : xs)
      var += (x - mean) * (x - mean);
    return fmt::format("{:.3f} ({:.3f})", mean, std::sqrt(var / static_cast<double>(xs.size() - 1)));
  }

  void run() {
    auto kv = model.shown();
    kv.erase(kv.begin());
    kv.insert(kv.begin(), {{"table", table.shown()}, {"data", data}, {"window", std::to_string(window)},
                           {"runs", std::to_string(runs)}, {"models", join(models)}});
    echo("eval", kv);
    const auto t = table.load();
    const auto loaded = load_dataset(data, t, window);
    const auto [train_set, val_set] =
        synth::split_tail(loaded.dataset.train, synth::kValidationFraction);
    const std::map<std::string, std::string> titles = {{"logistic", "Logistic regression"},
                                                       {"simple", "Simple net"},
                                                       {"bidi", "Bidirectional net"},
                                                       {"inception", "Inception-like net"}};
    std::vector<std::tuple<std::string, std::string, std::string>> rows;
    for (const auto &name : models) {
      std::vector<double> ps, rs;
      for (int r = 0; r < runs; ++r) {
        auto opts = model;
        opts.model = name == "logistic" ? "simple" : name;
        opts.seed = model.seed + static_cast<std::uint64_t>(r);
        const auto cfg = opts.config(t.size(), loaded.class_names.size());
        ml::MacroScores s;
        if (name == "logistic") {
          s = ml::evaluate_baseline(ml::train_baseline(cfg, loaded.dataset.train),
                                    loaded.dataset.test, cfg.classes);
        } else {
          const auto res = ml::train(cfg, train_set, val_set);
          s = ml::evaluate_model(res.params, cfg, loaded.dataset.test);
        }
        spdlog::info("{} run {}: precision {:.4f} recall {:.4f}", name, r + 1, s.precision,
                     s.recall);
        ps.push_back(s.precision);
        rs.push_back(s.recall);
      }
      rows.emplace_back(titles.at(name), cell(ps), cell(rs));
    }
    std::cout << fmt::format("{:<22} | {:<15} | {:<15}\n", "Model", "Precision", "Recall");
    std::cout << std::string(22, '-') << "-+-" << std::string(15, '-') << "-+-"
              << std::string(15, '-') << '\n';
    for (const auto &[m, p, r] : rows)
      std::cout << fmt::format("{:<22} | {:<15} | {:<15}\n", m, p, r);
  }
};

struct ServeCmd {
  TableOpt table;
  DetectOpts detect;
  std::string model = "model.ckpt";
  std::string listen = "127.0.0.1:7400";
  std::size_t queue_cap = pipeline::kDefaultQueueCapacity;
  int metrics_port = -1;
  std::string alerts;
  std::string records;
  double duration = 0;

  void add(CLI::App &root) {
    auto *app = root.add_subcommand("serve", "Run the monitoring server");
    table.add(*app);
    detect.add(*app);
    app->add_option("--model", model, "Checkpoint written by 'sccv train'");
    app->add_option("--listen", listen, "Address for agent connections, host:port");
    app->add_option("--queue-cap", queue_cap, "Ingestion queue capacity in records")
        ->check(CLI::PositiveNumber);
    app->add_option("--metrics-port", metrics_port, "Port for GET /metrics; -1 disables");
    app->add_option("--alerts", alerts, "Append alert lines to this file instead of the log");
    app->add_option("--records", records, "Append every consumed record to this file");
    app->add_option("--duration-secs", duration, "Stop after this many seconds; 0 runs until signalled");
    app->callback([this] { run(); });
  }

  void run() {
    auto kv = detect.shown();
    kv.insert(kv.begin(), {{"table", table.shown()}, {"model", model}, {"listen", listen},
                           {"queue-cap", std::to_string(queue_cap)},
                           {"metrics-port", std::to_string(metrics_port)}});
    echo("serve", kv);
    const auto t = table.load();
    pipeline::ServerConfig cfg;
    cfg.listen = listen;
    cfg.queue_capacity = queue_cap;
    cfg.monitor = detect.monitor();
    cfg.malicious = detect.malicious;
    cfg.metrics_port = metrics_port;
    cfg.alerts_path = alerts;
    cfg.records_path = records;
    pipeline::Server server(cfg, load_model_for(model, t));
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.start();
    if (metrics_port >= 0)
      spdlog::info("metrics on port {}", server.metrics_port());
    const auto started = std::chrono::steady_clock::now();
    while (!g_stop) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
      if (duration > 0 && std::chrono::steady_clock::now() - started >=
                              std::chrono::duration<double>(duration))
        break;
    }
    server.stop();
    std::cout << server.metrics_text();
  }
};

struct AgentCmd {
  TableOpt table;
  std::string source = "-";
  double interval_secs = 1.0;
  double flush_secs = 1.0;
  std::string connect = "127.0.0.1:7400";
  std::string host_id;
  int retries = 8;

  void add(CLI::App &root) {
    auto *app = root.add_subcommand("agent", "Aggregate a trace and stream records to a server");
    table.add(*app);
    app->add_option("source", source, "Trace file; - reads stdin");
    app->add_option("--interval-secs", interval_secs, "Aggregation interval t in seconds");
    app->add_option("--flush-secs", flush_secs, "Send period in trace seconds (>= interval)");
    app->add_option("--connect", connect, "Server address, host:port");
    app->add_option("--host-id", host_id, "Host id replacing the one in the trace");
    app->add_option("--retries", retries, "Reconnect attempts before giving up");
    app->callback([this] { run(); });
  }

  void run() {
    echo("agent", {{"table", table.shown()},
                   {"source", source},
                   {"interval-secs", fmt::format("{}", interval_secs)},
                   {"flush-secs", fmt::format("{}", flush_secs)},
                   {"connect", connect},
                   {"host-id", host_id.empty() ? "(from trace)" : host_id},
                   {"retries", std::to_string(retries)}});
    pipeline::AgentConfig cfg;
    cfg.source = source;
    cfg.interval = seconds_to_nanos(interval_secs);
    cfg.flush_period = seconds_to_nanos(flush_secs);
    cfg.connect = connect;
    cfg.host_id = host_id;
    cfg.max_retries = retries;
    pipeline::Agent agent(cfg, table.load());
    agent.run();
    const auto &s = agent.stats();
    std::cout << fmt::format("events {} parse_errors {} late {} records_sent {} reconnects {}\n",
                             s.events, s.parse_errors, s.late_events, s.records_sent,
                             s.reconnects);
  }
};

struct DetectCmd {
  TableOpt table;
  DetectOpts detect;
  std::string model = "model.ckpt";
  std::string records;
  std::string out;
  bool verdicts = false;

  void add(CLI::App &root) {
    auto *app = root.add_subcommand("detect", "Run detection offline over a record file");
    table.add(*app);
    detect.add(*app);
    app->add_option("--model", model, "Checkpoint written by 'sccv train'");
    app->add_option("records", records, "Record file")->required();
    app->add_option("-o,--out", out, "Alert file; stdout when omitted");
    app->add_flag("--verdicts", verdicts, "Also print every window verdict");
    app->callback([this] { run(); });
  }

  void run() {
    auto kv = detect.shown();
    kv.insert(kv.begin(), {{"table", table.shown()}, {"model", model}, {"records", records}});
    echo("detect", kv);
    const auto t = table.load();
    pipeline::Monitor monitor(load_model_for(model, t), detect.malicious, detect.monitor());
    std::ifstream in(records, std::ios::binary);
    if (!in)
      throw Error("cannot open records '" + records + "'");
    std::ofstream file;
    std::ostream *sink = &std::cout;
    if (!out.empty()) {
      file.open(out);
      if (!file)
        throw Error("cannot open '" + out + "'");
      sink = &file;
    }
    traceio::RecordReader reader(in, t.size());
    pipeline::Monitor::Output o;
    std::size_t n = 0, windows = 0, alerts = 0;
    std::map<detect::VerdictKind, std::size_t> kinds;
    std::vector<CountVector> chunk;
    bool more = true;
    while (more) {
      chunk.clear();
      while (chunk.size() < 1024) {
        auto r = reader.next();
        if (!r) {
          more = false;
          break;
        }
        chunk.push_back(std::move(*r));
      }
      o.verdicts.clear();
      o.alerts.clear();
      monitor.process_batch(chunk, o);
      n += chunk.size();
      windows += o.verdicts.size();
      for (const auto &v : o.verdicts) {
        ++kinds[v.kind];
        if (verdicts)
          std::cout << fmt::format("verdict {}:{} [{}, {}) {} predicted={} conf={:.4f}\n",
                                   v.window.host_id, v.window.pid, v.window.window_start,
                                   v.window.window_end, detect::to_string(v.kind),
                                   monitor.registry().name(v.predicted), v.confidence);
      }
      for (const auto &a : o.alerts) {
        *sink << detect::format_alert(a, monitor.registry()) << '\n';
        ++alerts;
      }
    }
    spdlog::info("{} records, {} processes, {} windows, {} alerts; normal {} novelty {} "
                 "non_grata {} masquerade {}",
                 n, monitor.processes(), windows, alerts, kinds[detect::VerdictKind::normal],
                 kinds[detect::VerdictKind::novelty], kinds[detect::VerdictKind::non_grata],
                 kinds[detect::VerdictKind::masquerade]);
  }
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("sccv");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char *level = std::getenv("SCCV_LOG"))
    spdlog::cfg::helpers::load_levels(level);
}

} // namespace

int main(int argc, char **argv) {
  setup_logging();
  CLI::App app{"sccv: syscall count-vector process classification and monitoring"};
  app.require_subcommand(1);
  GenCmd gen;
  AggregateCmd aggregate;
  TrainCmd train;
  EvalCmd eval;
  ServeCmd serve;
  AgentCmd agent;
  DetectCmd detect;
  gen.add(app);
  aggregate.add(app);
  train.add(app);
  eval.add(app);
  serve.add(app);
  agent.add(app);
  detect.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
