// sgl: command-line driver for generating data, learning graphs and running
// the classification and tracking experiments.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgl/sgl.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(sgl_status st) {
  if (st != SGL_OK) {
    throw CliError(std::string(sgl_status_string(st)) + ": " + sgl_last_error());
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Edges = std::unique_ptr<sgl_edges, Deleter<sgl_edges, sgl_edges_free>>;
using Signals = std::unique_ptr<sgl_signals, Deleter<sgl_signals, sgl_signals_free>>;
using Online = std::unique_ptr<sgl_online, Deleter<sgl_online, sgl_online_free>>;
using Stream = std::unique_ptr<sgl_stream, Deleter<sgl_stream, sgl_stream_free>>;
using ClassRun = std::unique_ptr<sgl_classification_run,
                                 Deleter<sgl_classification_run, sgl_classification_run_free>>;
using TrackRun =
    std::unique_ptr<sgl_tracking_run, Deleter<sgl_tracking_run, sgl_tracking_run_free>>;

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

template <typename F>
std::string fetch_string(F&& call) {
  size_t length = 0;
  check(call(nullptr, &length));
  std::string s(length, '\0');
  check(call(s.data(), &length));
  s.resize(length - 1);
  return s;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Files written by one run; removed again if the run fails.
class OutputDir {
 public:
  void open(const std::string& dir) {
    if (dir.empty()) throw CliError("--out is required");
    root_ = dir;
    make_dirs(root_);
  }

  std::string file(const std::string& name) {
    const fs::path p = root_ / name;
    if (p.has_parent_path()) make_dirs(p.parent_path());
    files_.push_back(p);
    return p.string();
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(file(name), std::ios::binary);
    if (!out) throw CliError("cannot write '" + (root_ / name).string() + "'");
    out << content;
  }

  void discard() {
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);
    files_.clear();
    dirs_.clear();
  }

 private:
  void make_dirs(const fs::path& dir) {
    std::vector<fs::path> missing;
    for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) missing.push_back(p);
    for (auto it = missing.rbegin(); it != missing.rend(); ++it) {
      fs::create_directory(*it);
      dirs_.push_back(*it);
    }
  }

  fs::path root_;
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
};

// Flags first, then the --config file on top. A manifest is accepted too.
json resolve(json flags, const std::string& config_path) {
  if (config_path.empty()) return flags;
  json file;
  try {
    file = json::parse(read_text(config_path));
  } catch (const json::exception& e) {
    throw CliError("malformed config '" + config_path + "': " + e.what());
  }
  if (!file.is_object()) throw CliError("config must be a JSON object");
  if (file.contains("command") && file.contains("config")) file = file["config"];
  flags.merge_patch(file);
  return flags;
}

void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
        allowed.end()) {
      throw CliError("unknown key '" + key + "' in " + where);
    }
  }
}

void write_manifest(OutputDir& out, const std::string& command, const json& config) {
  json m = {{"command", command}, {"version", sgl_version()}, {"config", config}};
  out.write("manifest.json", m.dump(2) + "\n");
}

void save_edges(const sgl_edges* e, const std::string& path, double threshold = 0.0) {
  if (e == nullptr) throw CliError(sgl_last_error());
  check(sgl_edges_save_csv(e, path.c_str(), threshold));
}

template <typename T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

struct LearnFlags {
  std::optional<double> alpha, beta, gamma, d_min, step, tol, threshold;
  std::optional<size_t> max_iter;
  bool accelerated = false;
  bool normalize = false;

  void add(CLI::App* app, bool scalar_weights = true) {
    if (scalar_weights) {
      app->add_option("--alpha", alpha, "log-barrier weight");
      app->add_option("--beta", beta, "Frobenius weight");
      app->add_option("--gamma", gamma, "discriminative weight");
    }
    app->add_option("--d-min", d_min, "degree floor of the step bound");
    app->add_option("--step", step, "fixed step (default 2/eta)");
    app->add_option("--tol", tol, "relative iterate change tolerance");
    app->add_option("--max-iter", max_iter, "iteration cap");
    app->add_option("--edge-threshold", threshold, "pruning threshold for evaluation");
    app->add_flag("--accelerated", accelerated, "momentum with restart");
    app->add_flag("--normalize-distances", normalize, "divide z by the class signal count");
  }

  json to_json() const {
    json j = json::object();
    put(j, "alpha", alpha);
    put(j, "beta", beta);
    put(j, "gamma", gamma);
    put(j, "d_min", d_min);
    put(j, "step", step);
    put(j, "tol", tol);
    put(j, "max_iter", max_iter);
    put(j, "edge_threshold", threshold);
    if (accelerated) j["accelerated"] = true;
    if (normalize) j["normalize_distances"] = true;
    return j;
  }
};

sgl_learn_config learn_config(const json& j) {
  sgl_learn_config c;
  sgl_learn_config_default(&c);
  check(sgl_learn_config_from_json(j.dump().c_str(), &c));
  return c;
}

json learn_config_json(const sgl_learn_config& c) {
  return json::parse(
      fetch_string([&](char* b, size_t* n) { return sgl_learn_config_to_json(&c, b, n); }));
}

// ---- synth ----

struct SynthFlags {
  std::string out, config, kind = "er", graph;
  std::optional<double> p, sigma, rewire;
  std::optional<int64_t> m, n, count;
  std::optional<uint64_t> seed;
  std::optional<size_t> switch_at, horizon;
};

int synth_graph(const SynthFlags& f, OutputDir& out) {
  json flags = {{"kind", f.kind}};
  put(flags, "p", f.p);
  put(flags, "m", f.m);
  put(flags, "n", f.n);
  put(flags, "seed", f.seed);
  const json cfg = resolve(flags, f.config);
  const std::string kind = cfg.value("kind", "er");
  if (kind != "er" && kind != "ba") throw CliError("kind must be er or ba");
  const bool er = kind == "er";
  const double param = er ? cfg.value("p", 0.1) : cfg.value("m", 3.0);
  const int64_t n = cfg.value("n", int64_t{60});
  const uint64_t seed = cfg.value("seed", uint64_t{1});
  json resolved = {{"kind", kind}, {"n", n}, {"seed", seed}};
  resolved[er ? "p" : "m"] = param;

  out.open(f.out);
  sgl_edges* raw = nullptr;
  size_t retries = 0;
  check(sgl_generate_graph(er ? SGL_GRAPH_ER : SGL_GRAPH_BA, param, n, seed, &raw, &retries));
  Edges g(raw);
  save_edges(g.get(), out.file("graph.csv"));
  resolved["retries"] = retries;
  write_manifest(out, "synth graph", resolved);
  return 0;
}

int synth_signals(const SynthFlags& f, OutputDir& out) {
  json flags = json::object();
  if (!f.graph.empty()) flags["graph"] = f.graph;
  put(flags, "count", f.count);
  put(flags, "sigma", f.sigma);
  put(flags, "seed", f.seed);
  put(flags, "n", f.n);
  const json cfg = resolve(flags, f.config);
  if (!cfg.contains("graph")) throw CliError("--graph is required");
  const std::string graph = cfg["graph"].get<std::string>();
  const int64_t count = cfg.value("count", int64_t{100});
  const double sigma = cfg.value("sigma", 0.5);
  const uint64_t seed = cfg.value("seed", uint64_t{1});
  const int64_t n = cfg.value("n", int64_t{0});

  sgl_edges* raw = nullptr;
  check(sgl_edges_load_csv(graph.c_str(), n, &raw));
  Edges g(raw);
  out.open(f.out);
  sgl_signals* xs = nullptr;
  int warning = 0;
  check(sgl_generate_signals(g.get(), count, sigma, seed, &xs, &warning));
  Signals x(xs);
  if (warning) std::cerr << "warning: graph is not connected\n";
  check(sgl_signals_save_csv(x.get(), out.file("signals.csv").c_str()));
  write_manifest(out, "synth signals",
                 {{"graph", graph}, {"n", sgl_edges_nodes(g.get())}, {"count", count},
                  {"sigma", sigma}, {"seed", seed}});
  return 0;
}

int synth_stream(const SynthFlags& f, OutputDir& out) {
  const int64_t n = f.n.value_or(30);
  const uint64_t seed = f.seed.value_or(11);
  const size_t switch_at = f.switch_at.value_or(2000);
  const size_t horizon = f.horizon.value_or(2 * switch_at);
  if (horizon <= switch_at) throw CliError("horizon must extend past the switch");
  json flags = {
      {"sigma", f.sigma.value_or(0.05)},
      {"seed", seed},
      {"segments",
       {{{"duration", switch_at},
         {"graph", {{"kind", "er"}, {"p", f.p.value_or(0.1)}, {"n", n}, {"seed", seed}}}},
        {{"duration", horizon - switch_at},
         {"rewire",
          {{"fraction", f.rewire.value_or(0.4)}, {"seed", sgl_derive_seed(seed, 0x52, 0)}}}}}}};
  const json cfg = resolve(flags, f.config);

  out.open(f.out);
  sgl_stream* raw = nullptr;
  check(sgl_stream_create(cfg.dump().c_str(), &raw));
  Stream s(raw);
  check(sgl_stream_write_ndjson(s.get(), out.file("stream.ndjson").c_str()));
  for (size_t seg = 0; seg < sgl_stream_segments(s.get()); ++seg) {
    save_edges(sgl_stream_truth(s.get(), seg), out.file("truth_" + std::to_string(seg) + ".csv"));
  }
  write_manifest(out, "synth stream", cfg);
  return 0;
}

// ---- learn-batch ----

struct BatchFlags {
  std::string out, config, data;
  std::optional<size_t> target;
  LearnFlags learn;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

int learn_batch(const BatchFlags& f, OutputDir& out) {
  json flags = {{"learn", f.learn.to_json()}};
  if (!f.data.empty()) flags["data"] = split(f.data, ',');
  put(flags, "target", f.target);
  json cfg = resolve(flags, f.config);
  if (!cfg.contains("data") || cfg["data"].empty()) throw CliError("--data is required");
  const auto paths = cfg["data"].get<std::vector<std::string>>();
  const size_t target = cfg.value("target", size_t{0});
  const sgl_learn_config lc = learn_config(cfg.value("learn", json::object()));
  cfg["learn"] = learn_config_json(lc);
  cfg["target"] = target;

  std::vector<Signals> owned;
  std::vector<const sgl_signals*> classes;
  for (const auto& p : paths) {
    sgl_signals* raw = nullptr;
    check(sgl_signals_load_csv(p.c_str(), &raw));
    owned.emplace_back(raw);
    classes.push_back(raw);
  }
  out.open(f.out);
  sgl_edges* raw = nullptr;
  sgl_batch_diagnostics d{};
  check(sgl_learn_batch(classes.data(), classes.size(), target, &lc, nullptr, &raw, &d));
  Edges w(raw);
  save_edges(w.get(), out.file("edges.csv"));
  out.write("diagnostics.json",
            fetch_string([&](char* b, size_t* n) { return sgl_batch_diagnostics_json(&d, b, n); }) +
                "\n");
  write_manifest(out, "learn-batch", cfg);
  if (!d.converged) std::cerr << "warning: solver stopped at the iteration cap\n";
  return 0;
}

// ---- fit-classify ----

struct ClassifyFlags {
  std::string out, config, classes;
  std::optional<int64_t> n;
  std::optional<size_t> signals, trials, bandwidth;
  std::optional<double> sigma, train_fraction;
  std::optional<uint64_t> seed;
  std::vector<double> alpha, beta, gamma;
  bool normalize_frobenius = false;
  bool serial = false;
  LearnFlags learn;
};

json resolved_classification(const json& spec) {
  const std::string text = spec.dump();
  return json::parse(fetch_string(
      [&](char* b, size_t* n) { return sgl_classification_spec_resolve(text.c_str(), b, n); }));
}

int fit_classify(const ClassifyFlags& f, OutputDir& out) {
  json spec = json::object();
  if (!f.classes.empty()) spec["classes"] = split(f.classes, ',');
  put(spec, "n", f.n);
  put(spec, "signals", f.signals);
  put(spec, "sigma", f.sigma);
  put(spec, "seed", f.seed);
  put(spec, "trials", f.trials);
  put(spec, "train_fraction", f.train_fraction);
  put(spec, "bandwidth", f.bandwidth);
  if (f.normalize_frobenius) spec["normalize_frobenius"] = true;
  if (f.serial) spec["parallel"] = false;
  const json learn = f.learn.to_json();
  if (!learn.empty()) spec["config"] = learn;
  json grid = json::object();
  if (!f.alpha.empty()) grid["alpha"] = f.alpha;
  if (!f.beta.empty()) grid["beta"] = f.beta;
  if (!f.gamma.empty()) grid["gamma"] = f.gamma;

  json cfg = resolve({{"spec", spec}, {"grid", grid}}, f.config);
  cfg.erase("selected");  // recorded by a previous run's manifest
  only_keys(cfg, {"spec", "grid"}, "fit-classify config");
  if (!cfg["grid"].is_object()) throw CliError("grid must be an object");
  only_keys(cfg["grid"], {"alpha", "beta", "gamma"}, "grid");
  for (const auto& [key, values] : cfg["grid"].items()) {
    if (!values.is_array() || values.empty()) throw CliError("grid " + key + " must be a nonempty list");
    for (const auto& v : values) {
      if (!v.is_number()) throw CliError("grid " + key + " must hold numbers");
    }
  }
  cfg["spec"] = resolved_classification(cfg.value("spec", json::object()));
  for (const char* key : {"alpha", "beta", "gamma"}) {
    if (!cfg["grid"].contains(key)) cfg["grid"][key] = {cfg["spec"]["config"][key]};
  }

  out.open(f.out);
  std::ostringstream results, summary;
  results << "alpha,beta,gamma,trial,accuracy,discriminability";
  summary << "alpha,beta,gamma,accuracy,discriminability";
  bool header_done = false;
  ClassRun best;
  json best_point;
  double best_accuracy = -1.0;

  for (double a : cfg["grid"]["alpha"].get<std::vector<double>>()) {
    for (double b : cfg["grid"]["beta"].get<std::vector<double>>()) {
      for (double g : cfg["grid"]["gamma"].get<std::vector<double>>()) {
        json point = cfg["spec"];
        point["config"]["alpha"] = a;
        point["config"]["beta"] = b;
        point["config"]["gamma"] = g;
        sgl_classification_run* raw = nullptr;
        check(sgl_classification_run_create(point.dump().c_str(), &raw));
        ClassRun run(raw);
        const size_t classes = sgl_classification_run_classes(run.get());
        if (!header_done) {
          for (size_t c = 0; c < classes; ++c) {
            const std::string label = sgl_classification_run_label(run.get(), c);
            results << ",f_" << label;
            summary << ",f_" << label;
          }
          results << "\n";
          summary << "\n";
          header_done = true;
        }
        const size_t trials = sgl_classification_run_trials(run.get());
        double mean_acc = 0.0, mean_disc = 0.0;
        std::vector<double> mean_f(classes, 0.0), fm(classes);
        for (size_t t = 0; t < trials; ++t) {
          double acc = 0.0, disc = 0.0;
          check(sgl_classification_run_trial(run.get(), t, &acc, &disc, fm.data()));
          results << fmt(a) << ',' << fmt(b) << ',' << fmt(g) << ',' << t << ',' << fmt(acc)
                  << ',' << fmt(disc);
          for (size_t c = 0; c < classes; ++c) {
            results << ',' << fmt(fm[c]);
            mean_f[c] += fm[c] / trials;
          }
          results << "\n";
          mean_acc += acc / trials;
          mean_disc += disc / trials;
        }
        summary << fmt(a) << ',' << fmt(b) << ',' << fmt(g) << ',' << fmt(mean_acc) << ','
                << fmt(mean_disc);
        for (double v : mean_f) summary << ',' << fmt(v);
        summary << "\n";
        if (mean_acc > best_accuracy) {
          best_accuracy = mean_acc;
          best = std::move(run);
          best_point = point;
        }
      }
    }
  }
  out.write("results.csv", results.str());
  out.write("summary.csv", summary.str());

  // Artifacts of the most accurate grid point.
  sgl_classification_run* run = best.get();
  const size_t classes = sgl_classification_run_classes(run);
  const size_t trials = sgl_classification_run_trials(run);
  const int64_t n = sgl_classification_run_nodes(run);
  for (size_t c = 0; c < classes; ++c) {
    const std::string label = sgl_classification_run_label(run, c);
    for (size_t t = 0; t < trials; ++t) {
      const std::string suffix = label + "_trial" + std::to_string(t) + ".csv";
      save_edges(sgl_classification_run_graph(run, t, c), out.file("edges_" + suffix));
      save_edges(sgl_classification_run_truth(run, t, c), out.file("truth_" + suffix));
    }
  }

  std::ostringstream energy;
  energy << "class,basis,index,cumulative_energy\n";
  std::vector<double> curve(n), mean(n);
  for (size_t c = 0; c < classes; ++c) {
    for (size_t k = 0; k < classes; ++k) {
      std::fill(mean.begin(), mean.end(), 0.0);
      for (size_t t = 0; t < trials; ++t) {
        check(sgl_classification_run_curve(run, t, c, k, curve.data()));
        for (int64_t i = 0; i < n; ++i) mean[i] += curve[i] / trials;
      }
      for (int64_t i = 0; i < n; ++i) {
        energy << sgl_classification_run_label(run, c) << ',' << sgl_classification_run_label(run, k)
               << ',' << i + 1 << ',' << fmt(mean[i]) << "\n";
      }
    }
  }
  out.write("energy.csv", energy.str());

  std::ostringstream preds;
  preds << "trial,index,truth,label,tie";
  for (size_t c = 0; c < classes; ++c) preds << ",energy_" << sgl_classification_run_label(run, c);
  preds << "\n";
  std::vector<double> energies(classes);
  for (size_t t = 0; t < trials; ++t) {
    for (size_t i = 0; i < sgl_classification_run_predictions(run, t); ++i) {
      size_t truth = 0, label = 0;
      int tie = 0;
      check(sgl_classification_run_prediction(run, t, i, &truth, &label, energies.data(), &tie));
      preds << t << ',' << i << ',' << sgl_classification_run_label(run, truth) << ','
            << sgl_classification_run_label(run, label) << ',' << tie;
      for (double e : energies) preds << ',' << fmt(e);
      preds << "\n";
    }
  }
  out.write("predictions.csv", preds.str());
  check(sgl_classification_run_save_model(run, 0, out.file("model.json").c_str()));

  cfg["selected"] = best_point["config"];
  write_manifest(out, "fit-classify", cfg);
  std::cout << "accuracy " << fmt(best_accuracy) << "\n";
  return 0;
}

// ---- learn-online ----

struct OnlineFlags {
  std::string out, config, stream;
  std::optional<int64_t> n;
  std::optional<size_t> classes, window, warmup, snapshot_every, inner_iters;
  std::optional<double> theta;
  bool infinite = false;
  LearnFlags learn;
};

sgl_memory memory_from(const json& m) {
  sgl_memory mem{SGL_MEMORY_EMA, 0.003, 0};
  const std::string kind = m.value("kind", "ema");
  if (kind == "ema") {
    mem.theta = m.value("theta", 0.003);
  } else if (kind == "sliding") {
    mem.kind = SGL_MEMORY_SLIDING;
    mem.window = m.value("window", size_t{500});
  } else if (kind == "infinite") {
    mem.kind = SGL_MEMORY_INFINITE;
  } else {
    throw CliError("unknown memory kind '" + kind + "'");
  }
  return mem;
}

struct Record {
  uint64_t t;
  size_t cls;
  std::vector<double> x;
};

std::vector<Record> read_ndjson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open '" + path + "'");
  std::vector<Record> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      records.push_back(
          {j.at("t").get<uint64_t>(), j.at("class").get<size_t>(),
           j.at("x").get<std::vector<double>>()});
    } catch (const json::exception& e) {
      throw CliError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

int learn_online(const OnlineFlags& f, OutputDir& out) {
  json memory = {{"kind", "ema"}};
  if (f.theta) memory["theta"] = *f.theta;
  if (f.window) memory = {{"kind", "sliding"}, {"window", *f.window}};
  if (f.infinite) memory = {{"kind", "infinite"}};
  json flags = {{"memory", memory}, {"learn", f.learn.to_json()}};
  if (!f.stream.empty()) flags["stream"] = f.stream;
  put(flags, "n", f.n);
  put(flags, "classes", f.classes);
  put(flags, "warmup", f.warmup);
  put(flags, "snapshot_every", f.snapshot_every);
  put(flags, "inner_iters", f.inner_iters);
  json cfg = resolve(flags, f.config);
  if (!cfg.contains("stream")) throw CliError("--stream is required");

  const auto records = read_ndjson(cfg["stream"].get<std::string>());
  if (records.empty()) throw CliError("stream is empty");
  size_t num_classes = cfg.value("classes", size_t{0});
  if (num_classes == 0) {
    for (const auto& r : records) num_classes = std::max(num_classes, r.cls + 1);
  }
  const int64_t n = cfg.value("n", static_cast<int64_t>(records.front().x.size()));
  const size_t warmup = cfg.value("warmup", size_t{5});
  const size_t every = cfg.value("snapshot_every", size_t{500});
  const size_t inner = cfg.value("inner_iters", size_t{1});
  if (every == 0) throw CliError("snapshot cadence must be positive");
  const sgl_learn_config lc = learn_config(cfg.value("learn", json::object()));
  const sgl_memory mem = memory_from(cfg["memory"]);
  cfg["n"] = n;
  cfg["classes"] = num_classes;
  cfg["warmup"] = warmup;
  cfg["snapshot_every"] = every;
  cfg["inner_iters"] = inner;
  cfg["learn"] = learn_config_json(lc);

  sgl_online* raw = nullptr;
  check(sgl_online_create(n, num_classes, &lc, mem, inner, &raw));
  Online learner(raw);
  out.open(f.out);

  std::vector<std::vector<double>> pending(num_classes);
  std::vector<size_t> buffered(num_classes, 0);
  std::ostringstream diag;
  auto snapshot = [&](uint64_t t) {
    for (size_t c = 0; c < num_classes; ++c) {
      save_edges(sgl_online_edges(learner.get(), c),
                 out.file("snapshots/t" + std::to_string(t) + "_class" + std::to_string(c) + ".csv"));
      sgl_online_diagnostics d{};
      check(sgl_online_diagnostics_get(learner.get(), c, &d));
      json line = json::parse(fetch_string(
          [&](char* b, size_t* len) { return sgl_online_diagnostics_json(&d, b, len); }));
      line["class"] = c;
      diag << line.dump() << "\n";
    }
  };

  for (const auto& r : records) {
    if (r.cls >= num_classes) throw CliError("record t=" + std::to_string(r.t) + ": unknown class");
    if (static_cast<int64_t>(r.x.size()) != n) {
      throw CliError("record t=" + std::to_string(r.t) + ": expected " + std::to_string(n) +
                     " values");
    }
    if (buffered[r.cls] < warmup) {
      pending[r.cls].insert(pending[r.cls].end(), r.x.begin(), r.x.end());
      if (++buffered[r.cls] == warmup) {
        sgl_signals* xs = nullptr;
        check(sgl_signals_create(n, static_cast<int64_t>(warmup), pending[r.cls].data(), &xs));
        Signals x(xs);
        check(sgl_online_warm_start(learner.get(), r.cls, x.get()));
        pending[r.cls].clear();
      }
      continue;
    }
    check(sgl_online_ingest(learner.get(), r.cls, r.x.data()));
    const uint64_t t = sgl_online_time(learner.get());
    if (t % every == 0) snapshot(t);
  }
  for (size_t c = 0; c < num_classes; ++c) {
    save_edges(sgl_online_edges(learner.get(), c), out.file("edges_" + std::to_string(c) + ".csv"));
  }
  if (sgl_online_time(learner.get()) % every != 0) snapshot(sgl_online_time(learner.get()));
  out.write("diagnostics.ndjson", diag.str());
  write_manifest(out, "learn-online", cfg);
  return 0;
}

// ---- track-experiment ----

struct TrackFlags {
  std::string out, config;
  std::optional<int64_t> n;
  std::optional<double> p, rewire, sigma, theta;
  std::optional<size_t> switch_at, horizon, checkpoint, warmup, settle, inner_iters;
  std::optional<uint64_t> seed;
  LearnFlags learn;
};

std::string report_row(const sgl_tracking_sample& s) {
  return fetch_string([&](char* b, size_t* n) { return sgl_tracking_report_row(&s, b, n); });
}

int track_experiment(const TrackFlags& f, OutputDir& out) {
  json spec = json::object();
  put(spec, "n", f.n);
  put(spec, "p", f.p);
  put(spec, "switch_at", f.switch_at);
  put(spec, "horizon", f.horizon);
  put(spec, "rewire", f.rewire);
  put(spec, "sigma", f.sigma);
  put(spec, "theta", f.theta);
  put(spec, "seed", f.seed);
  put(spec, "checkpoint", f.checkpoint);
  put(spec, "warmup_signals", f.warmup);
  put(spec, "settle", f.settle);
  put(spec, "inner_iters", f.inner_iters);
  const json learn = f.learn.to_json();
  if (!learn.empty()) spec["config"] = learn;
  json cfg = resolve(spec, f.config);
  const std::string text = cfg.dump();
  cfg = json::parse(fetch_string(
      [&](char* b, size_t* n) { return sgl_tracking_spec_resolve(text.c_str(), b, n); }));

  out.open(f.out);
  sgl_tracking_run* raw = nullptr;
  check(sgl_tracking_run_create(cfg.dump().c_str(), &raw));
  TrackRun run(raw);

  std::ostringstream trace;
  trace << sgl_tracking_report_header() << "\n";
  for (size_t i = 0; i < sgl_tracking_run_slots(run.get()); ++i) {
    sgl_tracking_sample s{};
    check(sgl_tracking_run_sample(run.get(), i, &s));
    trace << report_row(s) << "\n";
  }
  out.write("trace.csv", trace.str());

  std::ostringstream report;
  report << sgl_tracking_report_header()
         << ",segment,settled,relative_gap,f_online,f_batch\n";
  double max_gap = 0.0;
  json segments = json::array();
  for (size_t i = 0; i < sgl_tracking_run_checkpoints(run.get()); ++i) {
    sgl_checkpoint cp{};
    check(sgl_tracking_run_checkpoint(run.get(), i, &cp));
    report << report_row(cp.sample) << ',' << cp.segment << ',' << cp.settled << ','
           << fmt(cp.objective_gap) << ',' << fmt(cp.f_online) << ',' << fmt(cp.f_batch) << "\n";
    if (cp.settled) max_gap = std::max(max_gap, cp.objective_gap);
    if (cp.segment_end) {
      const std::string seg = std::to_string(cp.segment);
      save_edges(sgl_tracking_run_online(run.get(), i), out.file("edges_online_" + seg + ".csv"));
      save_edges(sgl_tracking_run_batch(run.get(), i), out.file("edges_batch_" + seg + ".csv"));
      segments.push_back({{"segment", cp.segment}, {"t", cp.t}, {"f_online", cp.f_online},
                          {"f_batch", cp.f_batch}});
    }
  }
  out.write("report.csv", report.str());
  for (size_t s = 0; s < sgl_tracking_run_segments(run.get()); ++s) {
    save_edges(sgl_tracking_run_truth(run.get(), s), out.file("truth_" + std::to_string(s) + ".csv"));
  }
  const json summary = {{"violations", sgl_tracking_run_violations(run.get())},
                        {"max_settled_gap", max_gap},
                        {"segments", segments}};
  out.write("summary.json", summary.dump(2) + "\n");
  write_manifest(out, "track-experiment", cfg);
  std::cout << "violations " << sgl_tracking_run_violations(run.get()) << ", max gap "
            << fmt(max_gap) << "\n";
  return 0;
}

// ---- eval ----

struct EvalFlags {
  std::string out, config, estimate, truth, previous;
  std::optional<double> threshold;
  std::optional<int64_t> n;
};

Edges load_edges(const std::string& path, int64_t n) {
  sgl_edges* raw = nullptr;
  check(sgl_edges_load_csv(path.c_str(), n, &raw));
  return Edges(raw);
}

int eval(const EvalFlags& f, OutputDir& out) {
  json flags = json::object();
  if (!f.estimate.empty()) flags["estimate"] = f.estimate;
  if (!f.truth.empty()) flags["truth"] = f.truth;
  if (!f.previous.empty()) flags["previous"] = f.previous;
  put(flags, "threshold", f.threshold);
  put(flags, "n", f.n);
  json cfg = resolve(flags, f.config);
  if (!cfg.contains("estimate") || !cfg.contains("truth")) {
    throw CliError("--estimate and --truth are required");
  }
  const std::string est_path = cfg["estimate"], truth_path = cfg["truth"];
  const double threshold = cfg.value("threshold", 1e-3);
  int64_t n = cfg.value("n", int64_t{0});
  if (n == 0) {
    n = std::max(sgl_edges_nodes(load_edges(est_path, 0).get()),
                 sgl_edges_nodes(load_edges(truth_path, 0).get()));
  }
  const Edges est = load_edges(est_path, n), truth = load_edges(truth_path, n);
  cfg["n"] = n;
  cfg["threshold"] = threshold;

  double precision = 0, recall = 0, fm = 0, lambda2 = 0;
  check(sgl_edge_score(est.get(), truth.get(), threshold, &precision, &recall, &fm));
  check(sgl_algebraic_connectivity(est.get(), &lambda2));
  json result = {{"precision", precision}, {"recall", recall}, {"f_measure", fm},
                 {"edges", sgl_edges_count(est.get(), threshold)}, {"lambda2", lambda2}};
  if (cfg.contains("previous")) {
    const Edges prev = load_edges(cfg["previous"].get<std::string>(), n);
    double rtd = 0;
    check(sgl_relative_temporal_deviation(est.get(), prev.get(), &rtd));
    result["rtd"] = rtd;
  }
  if (!f.out.empty()) {
    out.open(f.out);
    out.write("eval.json", result.dump(2) + "\n");
    write_manifest(out, "eval", cfg);
  }
  std::cout << result.dump() << "\n";
  return 0;
}

// ---- transform ----

struct TransformFlags {
  std::string out, config, prices, mode;
  bool ndjson = false;
};

int transform(const TransformFlags& f, OutputDir& out) {
  json flags = json::object();
  if (!f.prices.empty()) flags["prices"] = f.prices;
  if (!f.mode.empty()) flags["mode"] = f.mode;
  if (f.ndjson) flags["ndjson"] = true;
  json cfg = resolve(flags, f.config);
  if (!cfg.contains("prices")) throw CliError("--prices is required");
  const std::string mode = cfg.value("mode", "log");
  if (mode != "log" && mode != "rdtv") throw CliError("mode must be log or rdtv");
  cfg["mode"] = mode;

  sgl_signals* raw = nullptr;
  check(sgl_transform_price_csv(cfg["prices"].get<std::string>().c_str(),
                                mode == "log" ? SGL_TRANSFORM_LOG : SGL_TRANSFORM_RDTV, &raw));
  Signals x(raw);
  out.open(f.out);
  check(sgl_signals_save_csv(x.get(), out.file("signals.csv").c_str()));
  if (cfg.value("ndjson", false)) {
    std::ostringstream ss;
    const int64_t n = sgl_signals_nodes(x.get());
    std::vector<double> v(n);
    for (int64_t t = 0; t < sgl_signals_count(x.get()); ++t) {
      check(sgl_signals_get(x.get(), t, v.data()));
      ss << json({{"t", t}, {"class", 0}, {"x", v}}).dump() << "\n";
    }
    out.write("stream.ndjson", ss.str());
  }
  write_manifest(out, "transform", cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn graph topologies from smooth graph signals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sgl_version()));

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate graphs, signals or streams");
  synth_cmd->require_subcommand(1);
  auto* sg = synth_cmd->add_subcommand("graph", "random ER or BA graph");
  auto* ss = synth_cmd->add_subcommand("signals", "smooth signals on a graph");
  auto* st = synth_cmd->add_subcommand("stream", "piecewise-constant stream with one switch");
  for (auto* c : {sg, ss, st}) {
    c->add_option("--out", synth.out, "output directory")->required();
    c->add_option("--config", synth.config, "JSON overriding the flags");
    c->add_option("--seed", synth.seed);
    c->add_option("--n", synth.n, "node count");
  }
  sg->add_option("--kind", synth.kind, "er or ba");
  sg->add_option("--p", synth.p, "ER edge probability");
  sg->add_option("--m", synth.m, "BA attachment count");
  ss->add_option("--graph", synth.graph, "edge list CSV");
  ss->add_option("--count", synth.count, "number of signals");
  ss->add_option("--sigma", synth.sigma, "noise level");
  st->add_option("--p", synth.p);
  st->add_option("--sigma", synth.sigma);
  st->add_option("--switch-at", synth.switch_at);
  st->add_option("--horizon", synth.horizon);
  st->add_option("--rewire", synth.rewire, "fraction of edges redrawn at the switch");

  BatchFlags batch;
  auto* lb = app.add_subcommand("learn-batch", "learn one class graph from signal CSVs");
  lb->add_option("--data", batch.data, "comma-separated signal CSVs, one per class");
  lb->add_option("--target", batch.target, "class to learn");
  lb->add_option("--out", batch.out)->required();
  lb->add_option("--config", batch.config);
  batch.learn.add(lb);

  ClassifyFlags cls;
  auto* fc = app.add_subcommand("fit-classify", "ER/BA style classification experiment");
  fc->add_option("--classes", cls.classes, "e.g. er:p=0.1,ba:m=3");
  fc->add_option("--n", cls.n);
  fc->add_option("--signals", cls.signals, "total signal count over all classes");
  fc->add_option("--sigma", cls.sigma);
  fc->add_option("--seed", cls.seed);
  fc->add_option("--trials", cls.trials);
  fc->add_option("--train-fraction", cls.train_fraction);
  fc->add_option("--bandwidth", cls.bandwidth, "low-pass bandwidth (default N/3)");
  fc->add_option("--alpha", cls.alpha, "comma list for a grid")->delimiter(',');
  fc->add_option("--beta", cls.beta, "comma list for a grid")->delimiter(',');
  fc->add_option("--gamma", cls.gamma, "comma list for a grid")->delimiter(',');
  fc->add_flag("--normalize-frobenius", cls.normalize_frobenius);
  fc->add_flag("--serial", cls.serial, "run trials one after another");
  fc->add_option("--out", cls.out)->required();
  fc->add_option("--config", cls.config);
  cls.learn.add(fc, false);

  OnlineFlags online;
  auto* lo = app.add_subcommand("learn-online", "track graphs over an NDJSON stream");
  lo->add_option("--stream", online.stream, "NDJSON records {t, class, x}");
  lo->add_option("--n", online.n);
  lo->add_option("--classes", online.classes);
  auto* theta = lo->add_option("--theta", online.theta, "EMA forgetting factor");
  auto* window = lo->add_option("--window", online.window, "sliding window length");
  auto* inf = lo->add_flag("--infinite", online.infinite, "running mean over all samples");
  theta->excludes(window)->excludes(inf);
  window->excludes(inf);
  lo->add_option("--warmup", online.warmup, "pre-stream signals per class");
  lo->add_option("--snapshot-every", online.snapshot_every);
  lo->add_option("--inner-iters", online.inner_iters);
  lo->add_option("--out", online.out)->required();
  lo->add_option("--config", online.config);
  online.learn.add(lo);

  TrackFlags track;
  auto* te = app.add_subcommand("track-experiment", "online vs batch tracking of a switching graph");
  te->add_option("--n", track.n);
  te->add_option("--p", track.p);
  te->add_option("--switch-at", track.switch_at);
  te->add_option("--horizon", track.horizon);
  te->add_option("--rewire", track.rewire);
  te->add_option("--sigma", track.sigma);
  te->add_option("--theta", track.theta);
  te->add_option("--seed", track.seed);
  te->add_option("--checkpoint", track.checkpoint, "checkpoint cadence");
  te->add_option("--warmup", track.warmup, "pre-stream signals");
  te->add_option("--settle", track.settle, "samples after a switch before gaps count");
  te->add_option("--inner-iters", track.inner_iters);
  te->add_option("--out", track.out)->required();
  te->add_option("--config", track.config);
  track.learn.add(te);

  EvalFlags ev;
  auto* ec = app.add_subcommand("eval", "compare an estimated graph with a reference");
  ec->add_option("--estimate", ev.estimate);
  ec->add_option("--truth", ev.truth);
  ec->add_option("--previous", ev.previous, "earlier estimate for temporal deviation");
  ec->add_option("--threshold", ev.threshold);
  ec->add_option("--n", ev.n);
  ec->add_option("--out", ev.out);
  ec->add_option("--config", ev.config);

  TransformFlags tr;
  auto* tc = app.add_subcommand("transform", "price table to graph signals");
  tc->add_option("--prices", tr.prices, "CSV date,node_0,...");
  tc->add_option("--mode", tr.mode, "log or rdtv");
  tc->add_flag("--ndjson", tr.ndjson, "also write an NDJSON stream");
  tc->add_option("--out", tr.out)->required();
  tc->add_option("--config", tr.config);

  CLI11_PARSE(app, argc, argv);

  OutputDir out;
  try {
    if (sg->parsed()) return synth_graph(synth, out);
    if (ss->parsed()) return synth_signals(synth, out);
    if (st->parsed()) return synth_stream(synth, out);
    if (lb->parsed()) return learn_batch(batch, out);
    if (fc->parsed()) return fit_classify(cls, out);
    if (lo->parsed()) return learn_online(online, out);
    if (te->parsed()) return track_experiment(track, out);
    if (ec->parsed()) return eval(ev, out);
    if (tc->parsed()) return transform(tr, out);
  } catch (const std::exception& e) {
    out.discard();
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
