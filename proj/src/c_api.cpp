#include "sgl/sgl.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "sgl/batch.hpp"
#include "sgl/classifier.hpp"
#include "sgl/error.hpp"
#include "sgl/evalkit.hpp"
#include "sgl/experiment.hpp"
#include "sgl/graph.hpp"
#include "sgl/io.hpp"
#include "sgl/online.hpp"
#include "sgl/synth.hpp"

struct sgl_edges {
  sgl::EdgeVector value;
};

struct sgl_signals {
  sgl::SignalMatrix value;
};

struct sgl_classifier {
  sgl::ClassifierModel model;
  std::vector<sgl_edges> graphs;
};

struct sgl_stream {
  sgl::SyntheticStream stream;
  std::vector<sgl_edges> truths;
};

struct sgl_online {
  sgl::OnlineLearner learner;
  // Views handed out by sgl_online_edges, refreshed on each call.
  mutable std::vector<sgl_edges> views;
};

struct sgl_tracker {
  sgl::Tracker tracker;
  sgl_edges estimate;
  sgl_edges optimum;
};

struct sgl_classification_run {
  sgl::ClassificationSpec spec;
  std::vector<sgl::ClassificationTrial> trials;
  std::vector<std::string> labels;
  std::vector<std::vector<sgl_edges>> graphs;
  std::vector<std::vector<sgl_edges>> truths;
};

struct sgl_tracking_run {
  sgl::TrackingRun run;
  std::vector<sgl_edges> online;
  std::vector<sgl_edges> batch;
  std::vector<sgl_edges> truths;
};

namespace {

thread_local std::string last_error;

sgl_status to_status(sgl::ErrorCode code) {
  switch (code) {
    case sgl::ErrorCode::kInvalidArgument: return SGL_INVALID_ARGUMENT;
    case sgl::ErrorCode::kInvalidPair: return SGL_INVALID_PAIR;
    case sgl::ErrorCode::kDimensionMismatch: return SGL_DIMENSION_MISMATCH;
    case sgl::ErrorCode::kInput: return SGL_INPUT_ERROR;
    case sgl::ErrorCode::kDegenerateDegree: return SGL_DEGENERATE_DEGREE;
    case sgl::ErrorCode::kUndefined: return SGL_UNDEFINED;
    case sgl::ErrorCode::kIo: return SGL_IO_ERROR;
  }
  return SGL_INTERNAL;
}

template <typename F>
sgl_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SGL_OK;
  } catch (const sgl::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SGL_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SGL_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return SGL_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) sgl::fail(sgl::ErrorCode::kInvalidArgument, what);
}

sgl::LearnConfig to_cpp(const sgl_learn_config* c) {
  sgl::LearnConfig out;
  if (c == nullptr) return out;
  out.alpha = c->alpha;
  out.beta = c->beta;
  out.gamma = c->gamma;
  out.d_min = c->d_min;
  if (c->step > 0.0) out.step = c->step;
  out.tol = c->tol;
  out.max_iter = c->max_iter;
  out.accelerated = c->accelerated != 0;
  out.edge_threshold = c->edge_threshold;
  out.normalize_distances = c->normalize_distances != 0;
  return out;
}

void from_cpp(const sgl::LearnConfig& c, sgl_learn_config* out) {
  out->alpha = c.alpha;
  out->beta = c.beta;
  out->gamma = c.gamma;
  out->d_min = c.d_min;
  out->step = c.step.value_or(0.0);
  out->tol = c.tol;
  out->max_iter = c.max_iter;
  out->accelerated = c.accelerated ? 1 : 0;
  out->edge_threshold = c.edge_threshold;
  out->normalize_distances = c.normalize_distances ? 1 : 0;
}

sgl::BatchDiagnostics to_cpp(const sgl_batch_diagnostics& d) {
  return {d.iterations, d.final_objective, d.converged != 0, d.clamping_activated != 0,
          d.restarts};
}

void from_cpp(const sgl::BatchDiagnostics& d, sgl_batch_diagnostics* out) {
  if (out == nullptr) return;
  out->iterations = d.iterations;
  out->final_objective = d.final_objective;
  out->converged = d.converged ? 1 : 0;
  out->clamping_activated = d.clamping_activated ? 1 : 0;
  out->restarts = d.restarts;
}

sgl::TrackingSample to_cpp(const sgl_tracking_sample& s) {
  sgl::TrackingSample out;
  out.t = s.t;
  out.distance = s.distance;
  out.bound = s.bound;
  out.simplified_bound = s.simplified_bound;
  out.objective = s.objective;
  out.optimum = s.optimum;
  out.contraction = s.contraction;
  out.degenerate = s.degenerate != 0;
  out.clamped = s.clamped != 0;
  return out;
}

sgl_status copy_string(const std::string& s, char* buffer, size_t* length) {
  return guarded([&] {
    require(length != nullptr, "length is null");
    const size_t needed = s.size() + 1;
    const size_t room = *length;
    *length = needed;
    if (buffer == nullptr) return;
    if (room < needed) sgl::fail(sgl::ErrorCode::kInvalidArgument, "buffer too small");
    std::memcpy(buffer, s.c_str(), needed);
  });
}

std::vector<sgl::SignalMatrix> gather(const sgl_signals* const* classes, size_t count) {
  require(classes != nullptr && count > 0, "no class datasets");
  std::vector<sgl::SignalMatrix> out;
  out.reserve(count);
  for (size_t c = 0; c < count; ++c) {
    require(classes[c] != nullptr, "null class dataset");
    out.push_back(classes[c]->value);
  }
  return out;
}

sgl::Vector column(const double* x, sgl::Index n) {
  require(x != nullptr, "signal is null");
  return Eigen::Map<const sgl::Vector>(x, n);
}

template <typename T>
void store(T* value, T** out) {
  *out = value;
}

sgl_classifier* wrap(sgl::ClassifierModel model) {
  std::vector<sgl_edges> graphs;
  for (const auto& g : model.graphs()) graphs.push_back({g.edges});
  return new sgl_classifier{std::move(model), std::move(graphs)};
}

sgl::MemoryMode to_cpp(const sgl_memory& m) {
  switch (m.kind) {
    case SGL_MEMORY_EMA: return sgl::MemoryMode::ema(m.theta);
    case SGL_MEMORY_SLIDING: return sgl::MemoryMode::sliding(m.window);
    case SGL_MEMORY_INFINITE: return sgl::MemoryMode::infinite();
  }
  sgl::fail(sgl::ErrorCode::kInvalidArgument, "unknown memory kind");
}

void from_cpp(const sgl::OnlineDiagnostics& d, sgl_online_diagnostics* out) {
  out->t = d.t;
  out->objective = d.objective;
  out->step = d.step;
  out->min_degree = d.min_degree;
  out->clamped = d.clamped ? 1 : 0;
}

void from_cpp(const sgl::TrackingSample& s, sgl_tracking_sample* out) {
  out->t = s.t;
  out->distance = s.distance;
  out->bound = s.bound;
  out->simplified_bound = s.simplified_bound;
  out->objective = s.objective;
  out->optimum = s.optimum;
  out->contraction = s.contraction;
  out->degenerate = s.degenerate ? 1 : 0;
  out->clamped = s.clamped ? 1 : 0;
}

sgl::ClassificationSpec classification_spec(const char* json) {
  if (json == nullptr) return {};
  return sgl::io::classification_spec_from_json(json);
}

sgl::TrackingSpec tracking_spec(const char* json) {
  if (json == nullptr) return {};
  return sgl::io::tracking_spec_from_json(json);
}

template <typename T>
const T* element(const std::vector<T>& v, size_t i) {
  if (i >= v.size()) {
    last_error = "index out of range";
    return nullptr;
  }
  return &v[i];
}

}  // namespace

extern "C" {

const char* sgl_status_string(sgl_status status) {
  switch (status) {
    case SGL_OK: return "ok";
    case SGL_INVALID_ARGUMENT: return "invalid argument";
    case SGL_INVALID_PAIR: return "invalid pair";
    case SGL_DIMENSION_MISMATCH: return "dimension mismatch";
    case SGL_INPUT_ERROR: return "input error";
    case SGL_DEGENERATE_DEGREE: return "degenerate degree";
    case SGL_UNDEFINED: return "undefined";
    case SGL_IO_ERROR: return "i/o error";
    case SGL_OUT_OF_MEMORY: return "out of memory";
    case SGL_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sgl_last_error(void) { return last_error.c_str(); }

const char* sgl_version(void) { return "0.1.0"; }

// ---- configuration ----

void sgl_learn_config_default(sgl_learn_config* config) {
  if (config != nullptr) from_cpp(sgl::LearnConfig{}, config);
}

sgl_status sgl_learn_config_from_json(const char* json, sgl_learn_config* config) {
  return guarded([&] {
    require(json != nullptr && config != nullptr, "null argument");
    from_cpp(sgl::io::learn_config_from_json(json, to_cpp(config)), config);
  });
}

sgl_status sgl_learn_config_to_json(const sgl_learn_config* config, char* buffer,
                                    size_t* length) {
  if (config == nullptr) {
    last_error = "config is null";
    return SGL_INVALID_ARGUMENT;
  }
  return copy_string(sgl::io::learn_config_to_json(to_cpp(config)), buffer, length);
}

double sgl_lipschitz_constant(const sgl_learn_config* config, int64_t n) {
  return sgl::lipschitz_constant(to_cpp(config), n);
}

// ---- pairs and edge vectors ----

int64_t sgl_pair_count(int64_t n) { return n < 2 ? 0 : sgl::pair_count(n); }

sgl_status sgl_pair_index(int64_t i, int64_t j, int64_t n, int64_t* k) {
  return guarded([&] {
    require(k != nullptr, "k is null");
    *k = sgl::pair_index(i, j, n);
  });
}

sgl_status sgl_pair_nodes(int64_t k, int64_t n, int64_t* i, int64_t* j) {
  return guarded([&] {
    require(i != nullptr && j != nullptr, "null output");
    const auto [a, b] = sgl::pair_nodes(k, n);
    *i = a;
    *j = b;
  });
}

sgl_status sgl_edges_create(int64_t n, sgl_edges** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    store(new sgl_edges{sgl::EdgeVector(n)}, out);
  });
}

sgl_status sgl_edges_from_weights(int64_t n, const double* weights, sgl_edges** out) {
  return guarded([&] {
    require(out != nullptr && weights != nullptr, "null argument");
    require(n >= 2, "need at least two nodes");
    sgl::Vector w = Eigen::Map<const sgl::Vector>(weights, sgl::pair_count(n));
    store(new sgl_edges{sgl::EdgeVector(n, std::move(w))}, out);
  });
}

sgl_status sgl_edges_load_csv(const char* path, int64_t n, sgl_edges** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    store(new sgl_edges{sgl::io::read_edge_csv(std::string(path), n)}, out);
  });
}

sgl_status sgl_edges_save_csv(const sgl_edges* edges, const char* path, double threshold) {
  return guarded([&] {
    require(edges != nullptr && path != nullptr, "null argument");
    sgl::io::write_edge_csv(std::string(path), edges->value, threshold);
  });
}

void sgl_edges_free(sgl_edges* edges) { delete edges; }

int64_t sgl_edges_nodes(const sgl_edges* edges) { return edges ? edges->value.nodes() : 0; }

const double* sgl_edges_weights(const sgl_edges* edges) {
  return edges ? edges->value.weights().data() : nullptr;
}

sgl_status sgl_edges_set_weight(sgl_edges* edges, int64_t i, int64_t j, double value) {
  return guarded([&] {
    require(edges != nullptr, "edges is null");
    edges->value.set_weight(i, j, value);
  });
}

int64_t sgl_edges_count(const sgl_edges* edges, double threshold) {
  return edges ? edges->value.edge_count(threshold) : 0;
}

sgl_status sgl_edges_degrees(const sgl_edges* edges, double* degrees) {
  return guarded([&] {
    require(edges != nullptr && degrees != nullptr, "null argument");
    const sgl::Vector d = sgl::degrees(edges->value);
    std::copy(d.data(), d.data() + d.size(), degrees);
  });
}

sgl_status sgl_edges_laplacian(const sgl_edges* edges, double* laplacian) {
  return guarded([&] {
    require(edges != nullptr && laplacian != nullptr, "null argument");
    const sgl::Matrix l = sgl::laplacian(edges->value);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        laplacian, l.rows(), l.cols()) = l;
  });
}

sgl_status sgl_total_variation(const sgl_edges* edges, const double* x, double* tv) {
  return guarded([&] {
    require(edges != nullptr && tv != nullptr, "null argument");
    *tv = sgl::total_variation(sgl::laplacian(edges->value), column(x, edges->value.nodes()));
  });
}

sgl_status sgl_gft(const sgl_edges* edges, double* eigenvalues, double* eigenvectors) {
  return guarded([&] {
    require(edges != nullptr && eigenvalues != nullptr && eigenvectors != nullptr,
            "null argument");
    const sgl::GftBasis basis = sgl::gft_decompose(sgl::laplacian(edges->value));
    const auto n = basis.eigenvalues.size();
    std::copy(basis.eigenvalues.data(), basis.eigenvalues.data() + n, eigenvalues);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        eigenvectors, n, n) = basis.eigenvectors;
  });
}

// ---- signals ----

sgl_status sgl_signals_create(int64_t n, int64_t count, const double* data, sgl_signals** out) {
  return guarded([&] {
    require(out != nullptr && data != nullptr, "null argument");
    require(n > 0 && count > 0, "empty signal set");
    store(new sgl_signals{sgl::SignalMatrix(Eigen::Map<const sgl::Matrix>(data, n, count))},
          out);
  });
}

sgl_status sgl_signals_load_csv(const char* path, sgl_signals** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    store(new sgl_signals{sgl::io::read_signal_csv(std::string(path))}, out);
  });
}

sgl_status sgl_signals_save_csv(const sgl_signals* signals, const char* path) {
  return guarded([&] {
    require(signals != nullptr && path != nullptr, "null argument");
    sgl::io::write_signal_csv(std::string(path), signals->value);
  });
}

void sgl_signals_free(sgl_signals* signals) { delete signals; }

int64_t sgl_signals_nodes(const sgl_signals* signals) {
  return signals ? signals->value.nodes() : 0;
}

int64_t sgl_signals_count(const sgl_signals* signals) {
  return signals ? signals->value.signals() : 0;
}

sgl_status sgl_signals_get(const sgl_signals* signals, int64_t p, double* x) {
  return guarded([&] {
    require(signals != nullptr && x != nullptr, "null argument");
    require(p >= 0 && p < signals->value.signals(), "signal index out of range");
    const sgl::Vector v = signals->value.signal(p);
    std::copy(v.data(), v.data() + v.size(), x);
  });
}

sgl_status sgl_distance_vector(const sgl_signals* signals, double* z) {
  return guarded([&] {
    require(signals != nullptr && z != nullptr, "null argument");
    const sgl::DistanceVector d = sgl::distance_vector(signals->value);
    std::copy(d.values().data(), d.values().data() + d.size(), z);
  });
}

// ---- batch learning ----

sgl_status sgl_learn_batch(const sgl_signals* const* classes, size_t num_classes, size_t target,
                           const sgl_learn_config* config, const sgl_edges* init,
                           sgl_edges** out, sgl_batch_diagnostics* diagnostics) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    const auto data = gather(classes, num_classes);
    const auto problem = sgl::DiscriminativeProblem::from_datasets(data, target, to_cpp(config));
    std::optional<sgl::EdgeVector> w0;
    if (init != nullptr) w0 = init->value;
    auto result = sgl::learn_batch(problem, w0);
    from_cpp(result.diagnostics, diagnostics);
    store(new sgl_edges{std::move(result.weights)}, out);
  });
}

sgl_status sgl_batch_diagnostics_json(const sgl_batch_diagnostics* d, char* buffer,
                                      size_t* length) {
  if (d == nullptr) {
    last_error = "diagnostics is null";
    return SGL_INVALID_ARGUMENT;
  }
  return copy_string(sgl::io::batch_diagnostics_json(to_cpp(*d)), buffer, length);
}

// ---- classifier ----

void sgl_fit_options_default(sgl_fit_options* options) {
  if (options == nullptr) return;
  options->bandwidth = 0;
  options->normalize_frobenius = 0;
  options->parallel = 0;
}

sgl_status sgl_classifier_fit(const sgl_signals* const* classes, size_t num_classes,
                              const sgl_learn_config* config, const sgl_fit_options* options,
                              sgl_classifier** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    sgl::FitOptions fo;
    if (options != nullptr) {
      fo.bandwidth = options->bandwidth;
      fo.normalize_frobenius = options->normalize_frobenius != 0;
      fo.parallel = options->parallel != 0;
    }
    store(wrap(sgl::fit(gather(classes, num_classes), to_cpp(config), fo)), out);
  });
}

sgl_status sgl_classifier_load(const char* path, sgl_classifier** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    store(wrap(sgl::io::model_from_json(sgl::io::read_file(path))), out);
  });
}

sgl_status sgl_classifier_save(const sgl_classifier* model, const char* path) {
  return guarded([&] {
    require(model != nullptr && path != nullptr, "null argument");
    sgl::io::write_file(path, sgl::io::model_to_json(model->model));
  });
}

void sgl_classifier_free(sgl_classifier* model) { delete model; }

size_t sgl_classifier_classes(const sgl_classifier* model) {
  return model ? model->model.num_classes() : 0;
}

int64_t sgl_classifier_nodes(const sgl_classifier* model) {
  return model ? model->model.nodes() : 0;
}

size_t sgl_classifier_bandwidth(const sgl_classifier* model) {
  return model ? model->model.bandwidth() : 0;
}

sgl_status sgl_classify(const sgl_classifier* model, const double* x, size_t* label,
                        double* energies, int* tie) {
  return guarded([&] {
    require(model != nullptr && label != nullptr, "null argument");
    const auto r = sgl::classify(model->model, column(x, model->model.nodes()));
    *label = r.label;
    if (energies != nullptr) std::copy(r.energies.begin(), r.energies.end(), energies);
    if (tie != nullptr) *tie = r.tie ? 1 : 0;
  });
}

sgl_status sgl_cumulative_energy(const sgl_classifier* model, size_t cls, const double* x,
                                 double* curve) {
  return guarded([&] {
    require(model != nullptr && curve != nullptr, "null argument");
    const sgl::Vector c = sgl::cumulative_relative_energy(model->model.graph(cls).basis,
                                                          column(x, model->model.nodes()));
    std::copy(c.data(), c.data() + c.size(), curve);
  });
}

const sgl_edges* sgl_classifier_graph(const sgl_classifier* model, size_t cls) {
  if (model == nullptr || cls >= model->graphs.size()) {
    last_error = "class index out of range";
    return nullptr;
  }
  return &model->graphs[cls];
}

sgl_status sgl_classifier_diagnostics(const sgl_classifier* model, size_t cls,
                                      sgl_batch_diagnostics* diagnostics) {
  return guarded([&] {
    require(model != nullptr && diagnostics != nullptr, "null argument");
    from_cpp(model->model.graph(cls).diagnostics, diagnostics);
  });
}

// ---- synthetic data ----

uint64_t sgl_derive_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return sgl::derive_seed(seed, a, b);
}

sgl_status sgl_generate_graph(sgl_graph_kind kind, double param, int64_t n, uint64_t seed,
                              sgl_edges** out, size_t* retries) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    sgl::GraphSpec spec;
    spec.n = n;
    spec.seed = seed;
    if (kind == SGL_GRAPH_ER) {
      spec.kind = sgl::ErdosRenyi{param};
    } else if (kind == SGL_GRAPH_BA) {
      require(param == static_cast<double>(static_cast<sgl::Index>(param)), "m must be integral");
      spec.kind = sgl::BarabasiAlbert{static_cast<sgl::Index>(param)};
    } else {
      sgl::fail(sgl::ErrorCode::kInvalidArgument, "unknown graph kind");
    }
    auto g = sgl::gen_graph(spec);
    if (retries != nullptr) *retries = g.retries;
    store(new sgl_edges{std::move(g.edges)}, out);
  });
}

sgl_status sgl_rewire(const sgl_edges* edges, double fraction, uint64_t seed, sgl_edges** out,
                      int* warning) {
  return guarded([&] {
    require(edges != nullptr && out != nullptr, "null argument");
    auto r = sgl::rewire(edges->value, fraction, seed);
    if (warning != nullptr) *warning = r.warning.empty() ? 0 : 1;
    store(new sgl_edges{std::move(r.edges)}, out);
  });
}

sgl_status sgl_generate_signals(const sgl_edges* edges, int64_t count, double sigma,
                                uint64_t seed, sgl_signals** out, int* warning) {
  return guarded([&] {
    require(edges != nullptr && out != nullptr, "null argument");
    auto r = sgl::gen_smooth_signals(edges->value, count, sigma, seed);
    if (warning != nullptr) *warning = r.warning.empty() ? 0 : 1;
    store(new sgl_signals{std::move(r.signals)}, out);
  });
}

int sgl_is_connected(const sgl_edges* edges) {
  return edges != nullptr && sgl::is_connected(edges->value) ? 1 : 0;
}

sgl_status sgl_stream_create(const char* spec_json, sgl_stream** out) {
  return guarded([&] {
    require(spec_json != nullptr && out != nullptr, "null argument");
    auto stream = sgl::gen_stream(sgl::io::stream_spec_from_json(spec_json));
    std::vector<sgl_edges> truths;
    for (size_t s = 0; s < stream.num_segments(); ++s) truths.push_back({stream.truth(s)});
    store(new sgl_stream{std::move(stream), std::move(truths)}, out);
  });
}

void sgl_stream_free(sgl_stream* stream) { delete stream; }

size_t sgl_stream_horizon(const sgl_stream* stream) {
  return stream ? stream->stream.horizon() : 0;
}

size_t sgl_stream_segments(const sgl_stream* stream) {
  return stream ? stream->stream.num_segments() : 0;
}

int64_t sgl_stream_nodes(const sgl_stream* stream) { return stream ? stream->stream.nodes() : 0; }

size_t sgl_stream_segment_of(const sgl_stream* stream, size_t t) {
  if (stream == nullptr || t >= stream->stream.horizon()) return static_cast<size_t>(-1);
  return stream->stream.segment_of(t);
}

size_t sgl_stream_segment_start(const sgl_stream* stream, size_t segment) {
  if (stream == nullptr || segment >= stream->stream.num_segments()) {
    return static_cast<size_t>(-1);
  }
  return stream->stream.segment_start(segment);
}

const sgl_edges* sgl_stream_truth(const sgl_stream* stream, size_t segment) {
  if (stream == nullptr || segment >= stream->truths.size()) {
    last_error = "segment index out of range";
    return nullptr;
  }
  return &stream->truths[segment];
}

sgl_status sgl_stream_signal(const sgl_stream* stream, size_t t, double* x) {
  return guarded([&] {
    require(stream != nullptr && x != nullptr, "null argument");
    require(t < stream->stream.horizon(), "time index out of range");
    const sgl::Vector v = stream->stream.signal(t);
    std::copy(v.data(), v.data() + v.size(), x);
  });
}

sgl_status sgl_stream_write_ndjson(const sgl_stream* stream, const char* path) {
  return guarded([&] {
    require(stream != nullptr && path != nullptr, "null argument");
    std::string text;
    for (size_t t = 0; t < stream->stream.horizon(); ++t) {
      const sgl::Vector v = stream->stream.signal(t);
      text += sgl::io::format_stream_record({t, 0, std::vector<double>(v.data(), v.data() + v.size())});
      text += '\n';
    }
    sgl::io::write_file(path, text);
  });
}

// ---- online learning ----

sgl_status sgl_online_create(int64_t n, size_t num_classes, const sgl_learn_config* config,
                             sgl_memory memory, size_t inner_iters, sgl_online** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    sgl::OnlineLearner learner(n, num_classes, to_cpp(config), to_cpp(memory), inner_iters);
    store(new sgl_online{std::move(learner), {}}, out);
  });
}

sgl_status sgl_online_clone(const sgl_online* learner, sgl_online** out) {
  return guarded([&] {
    require(learner != nullptr && out != nullptr, "null argument");
    store(new sgl_online{learner->learner, {}}, out);
  });
}

void sgl_online_free(sgl_online* learner) { delete learner; }

sgl_status sgl_online_warm_start(sgl_online* learner, size_t cls, const sgl_signals* signals) {
  return guarded([&] {
    require(learner != nullptr && signals != nullptr, "null argument");
    learner->learner.warm_start(cls, signals->value);
  });
}

sgl_status sgl_online_ingest(sgl_online* learner, size_t cls, const double* x) {
  return guarded([&] {
    require(learner != nullptr && x != nullptr, "null argument");
    learner->learner.ingest(cls, std::span<const double>(x, learner->learner.nodes()));
  });
}

sgl_status sgl_online_update_distance(sgl_online* learner, size_t cls, const double* x) {
  return guarded([&] {
    require(learner != nullptr && x != nullptr, "null argument");
    learner->learner.update_distance(cls, std::span<const double>(x, learner->learner.nodes()));
  });
}

sgl_status sgl_online_step(sgl_online* learner, size_t cls) {
  return guarded([&] {
    require(learner != nullptr, "learner is null");
    learner->learner.step(cls);
  });
}

uint64_t sgl_online_time(const sgl_online* learner) { return learner ? learner->learner.time() : 0; }

const sgl_edges* sgl_online_edges(const sgl_online* learner, size_t cls) {
  if (learner == nullptr || cls >= learner->learner.num_classes()) {
    last_error = "class index out of range";
    return nullptr;
  }
  auto& views = learner->views;
  if (views.size() != learner->learner.num_classes()) views.resize(learner->learner.num_classes());
  views[cls].value = learner->learner.edges(cls);
  return &views[cls];
}

sgl_status sgl_online_diagnostics_get(const sgl_online* learner, size_t cls,
                                      sgl_online_diagnostics* diagnostics) {
  return guarded([&] {
    require(learner != nullptr && diagnostics != nullptr, "null argument");
    from_cpp(learner->learner.diagnostics(cls), diagnostics);
  });
}

sgl_status sgl_online_diagnostics_json(const sgl_online_diagnostics* d, char* buffer,
                                       size_t* length) {
  if (d == nullptr) {
    last_error = "diagnostics is null";
    return SGL_INVALID_ARGUMENT;
  }
  sgl::OnlineDiagnostics cpp{d->t, d->objective, d->step, d->min_degree, d->clamped != 0};
  return copy_string(sgl::io::online_diagnostics_json(cpp), buffer, length);
}

sgl_status sgl_online_oracle(const sgl_online* learner, size_t cls, const sgl_learn_config* config,
                             sgl_edges** out, double* optimum) {
  return guarded([&] {
    require(learner != nullptr && out != nullptr, "null argument");
    const auto frozen = learner->learner.problem(cls);
    const sgl::DiscriminativeProblem problem(
        frozen.own(), frozen.others(),
        config != nullptr ? to_cpp(config) : learner->learner.config());
    auto result = sgl::learn_batch(problem, learner->learner.edges(cls));
    if (optimum != nullptr) *optimum = sgl::objective(result.weights, problem);
    store(new sgl_edges{std::move(result.weights)}, out);
  });
}

// ---- tracking ----

sgl_status sgl_tracker_create(const sgl_online* learner, const sgl_learn_config* oracle_config,
                              sgl_tracker** out) {
  return guarded([&] {
    require(learner != nullptr && out != nullptr, "null argument");
    const auto oracle =
        oracle_config != nullptr ? to_cpp(oracle_config) : learner->learner.config();
    sgl::Tracker tracker(learner->learner, oracle);
    store(new sgl_tracker{std::move(tracker), {}, {}}, out);
  });
}

void sgl_tracker_free(sgl_tracker* tracker) { delete tracker; }

sgl_status sgl_tracker_ingest(sgl_tracker* tracker, const double* x, sgl_tracking_sample* sample) {
  return guarded([&] {
    require(tracker != nullptr && x != nullptr, "null argument");
    const auto s = tracker->tracker.ingest(
        std::span<const double>(x, tracker->tracker.learner().nodes()));
    if (sample != nullptr) from_cpp(s, sample);
  });
}

size_t sgl_tracker_violations(const sgl_tracker* tracker) {
  return tracker ? tracker->tracker.violations() : 0;
}

const sgl_edges* sgl_tracker_estimate(const sgl_tracker* tracker) {
  if (tracker == nullptr) return nullptr;
  auto* self = const_cast<sgl_tracker*>(tracker);
  self->estimate.value = tracker->tracker.learner().edges(0);
  return &self->estimate;
}

const sgl_edges* sgl_tracker_optimum(const sgl_tracker* tracker) {
  if (tracker == nullptr) return nullptr;
  auto* self = const_cast<sgl_tracker*>(tracker);
  self->optimum.value = tracker->tracker.optimum();
  return &self->optimum;
}

const char* sgl_tracking_report_header(void) {
  static const std::string header = sgl::io::tracking_report_header();
  return header.c_str();
}

sgl_status sgl_tracking_report_row(const sgl_tracking_sample* sample, char* buffer,
                                   size_t* length) {
  if (sample == nullptr) {
    last_error = "sample is null";
    return SGL_INVALID_ARGUMENT;
  }
  return copy_string(sgl::io::tracking_report_row(to_cpp(*sample)), buffer, length);
}

sgl_status sgl_tracking_bound(const double* contraction, const size_t* inner_iters,
                              const double* variation, size_t count, double initial_distance,
                              double* bound, double* simplified) {
  return guarded([&] {
    require(count > 0 && bound != nullptr, "null argument");
    const size_t m = count - 1;
    require(m == 0 || (contraction != nullptr && inner_iters != nullptr && variation != nullptr),
            "null factor arrays");
    const auto points = sgl::tracking_bound(std::span<const double>(contraction, m),
                                            std::span<const std::size_t>(inner_iters, m),
                                            std::span<const double>(variation, m),
                                            initial_distance);
    for (size_t t = 0; t < points.size(); ++t) {
      bound[t] = points[t].bound;
      if (simplified != nullptr) simplified[t] = points[t].simplified;
    }
  });
}

// ---- evaluation ----

sgl_status sgl_edge_score(const sgl_edges* estimate, const sgl_edges* truth, double threshold,
                          double* precision, double* recall, double* f_measure) {
  return guarded([&] {
    require(estimate != nullptr && truth != nullptr, "null argument");
    const auto s = sgl::edge_score(estimate->value, truth->value, threshold);
    if (precision != nullptr) *precision = s.precision;
    if (recall != nullptr) *recall = s.recall;
    if (f_measure != nullptr) *f_measure = s.f_measure;
  });
}

sgl_status sgl_relative_temporal_deviation(const sgl_edges* current, const sgl_edges* previous,
                                           double* rtd) {
  return guarded([&] {
    require(current != nullptr && previous != nullptr && rtd != nullptr, "null argument");
    *rtd = sgl::relative_temporal_deviation(current->value, previous->value);
  });
}

sgl_status sgl_algebraic_connectivity(const sgl_edges* edges, double* lambda2) {
  return guarded([&] {
    require(edges != nullptr && lambda2 != nullptr, "null argument");
    *lambda2 = sgl::algebraic_connectivity(edges->value);
  });
}

sgl_status sgl_series_transform(const double* prices, int64_t n, int64_t times,
                                sgl_transform mode, sgl_signals** out) {
  return guarded([&] {
    require(prices != nullptr && out != nullptr, "null argument");
    require(n > 0 && times > 0, "empty price table");
    const sgl::Matrix p =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            prices, n, times);
    const auto m = mode == SGL_TRANSFORM_RDTV ? sgl::SeriesTransform::kRdtv
                                              : sgl::SeriesTransform::kLog;
    store(new sgl_signals{sgl::series_transform(p, m)}, out);
  });
}

sgl_status sgl_transform_price_csv(const char* path, sgl_transform mode, sgl_signals** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    const auto table = sgl::io::read_price_csv(std::string(path));
    const auto m = mode == SGL_TRANSFORM_RDTV ? sgl::SeriesTransform::kRdtv
                                              : sgl::SeriesTransform::kLog;
    store(new sgl_signals{sgl::series_transform(table.prices, m)}, out);
  });
}

// ---- experiment protocols ----

sgl_status sgl_classification_spec_resolve(const char* spec_json, char* buffer, size_t* length) {
  std::string text;
  const sgl_status st = guarded([&] {
    text = sgl::io::classification_spec_to_json(classification_spec(spec_json));
  });
  return st == SGL_OK ? copy_string(text, buffer, length) : st;
}

sgl_status sgl_classification_run_create(const char* spec_json, sgl_classification_run** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    auto run = std::make_unique<sgl_classification_run>();
    run->spec = classification_spec(spec_json);
    run->trials = sgl::run_classification(run->spec);
    for (const auto& f : run->spec.classes) run->labels.push_back(sgl::family_label(f));
    for (const auto& t : run->trials) {
      std::vector<sgl_edges> graphs, truths;
      for (const auto& g : t.model.graphs()) graphs.push_back({g.edges});
      for (const auto& g : t.truths) truths.push_back({g});
      run->graphs.push_back(std::move(graphs));
      run->truths.push_back(std::move(truths));
    }
    *out = run.release();
  });
}

void sgl_classification_run_free(sgl_classification_run* run) { delete run; }

size_t sgl_classification_run_trials(const sgl_classification_run* run) {
  return run ? run->trials.size() : 0;
}

size_t sgl_classification_run_classes(const sgl_classification_run* run) {
  return run ? run->labels.size() : 0;
}

int64_t sgl_classification_run_nodes(const sgl_classification_run* run) {
  return run ? run->spec.n : 0;
}

const char* sgl_classification_run_label(const sgl_classification_run* run, size_t cls) {
  if (run == nullptr) return nullptr;
  const auto* label = element(run->labels, cls);
  return label ? label->c_str() : nullptr;
}

sgl_status sgl_classification_run_trial(const sgl_classification_run* run, size_t trial,
                                        double* accuracy, double* discriminability,
                                        double* f_measure) {
  return guarded([&] {
    require(run != nullptr && trial < run->trials.size(), "trial out of range");
    const auto& t = run->trials[trial];
    if (accuracy != nullptr) *accuracy = t.accuracy;
    if (discriminability != nullptr) *discriminability = t.discriminability;
    if (f_measure != nullptr) std::copy(t.f_measure.begin(), t.f_measure.end(), f_measure);
  });
}

const sgl_edges* sgl_classification_run_graph(const sgl_classification_run* run, size_t trial,
                                              size_t cls) {
  if (run == nullptr) return nullptr;
  const auto* g = element(run->graphs, trial);
  return g ? element(*g, cls) : nullptr;
}

const sgl_edges* sgl_classification_run_truth(const sgl_classification_run* run, size_t trial,
                                              size_t cls) {
  if (run == nullptr) return nullptr;
  const auto* g = element(run->truths, trial);
  return g ? element(*g, cls) : nullptr;
}

size_t sgl_classification_run_predictions(const sgl_classification_run* run, size_t trial) {
  if (run == nullptr || trial >= run->trials.size()) return 0;
  return run->trials[trial].predictions.size();
}

sgl_status sgl_classification_run_prediction(const sgl_classification_run* run, size_t trial,
                                             size_t index, size_t* truth, size_t* label,
                                             double* energies, int* tie) {
  return guarded([&] {
    require(run != nullptr && trial < run->trials.size(), "trial out of range");
    const auto& preds = run->trials[trial].predictions;
    require(index < preds.size(), "prediction out of range");
    const auto& p = preds[index];
    if (truth != nullptr) *truth = p.truth;
    if (label != nullptr) *label = p.label;
    if (energies != nullptr) std::copy(p.energies.begin(), p.energies.end(), energies);
    if (tie != nullptr) *tie = p.tie ? 1 : 0;
  });
}

sgl_status sgl_classification_run_curve(const sgl_classification_run* run, size_t trial,
                                        size_t cls, size_t basis, double* curve) {
  return guarded([&] {
    require(run != nullptr && curve != nullptr, "null argument");
    require(trial < run->trials.size(), "trial out of range");
    const auto& curves = run->trials[trial].curves;
    require(cls < curves.size() && basis < curves[cls].size(), "class out of range");
    const sgl::Vector& v = curves[cls][basis];
    std::copy(v.data(), v.data() + v.size(), curve);
  });
}

sgl_status sgl_classification_run_save_model(const sgl_classification_run* run, size_t trial,
                                             const char* path) {
  return guarded([&] {
    require(run != nullptr && path != nullptr, "null argument");
    require(trial < run->trials.size(), "trial out of range");
    sgl::io::write_file(path, sgl::io::model_to_json(run->trials[trial].model));
  });
}

sgl_status sgl_tracking_spec_resolve(const char* spec_json, char* buffer, size_t* length) {
  std::string text;
  const sgl_status st =
      guarded([&] { text = sgl::io::tracking_spec_to_json(tracking_spec(spec_json)); });
  return st == SGL_OK ? copy_string(text, buffer, length) : st;
}

sgl_status sgl_tracking_run_create(const char* spec_json, sgl_tracking_run** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    auto run = std::make_unique<sgl_tracking_run>();
    run->run = sgl::run_tracking(tracking_spec(spec_json));
    for (const auto& cp : run->run.checkpoints) {
      run->online.push_back({cp.online});
      run->batch.push_back({cp.batch});
    }
    for (const auto& g : run->run.truths) run->truths.push_back({g});
    *out = run.release();
  });
}

void sgl_tracking_run_free(sgl_tracking_run* run) { delete run; }

size_t sgl_tracking_run_slots(const sgl_tracking_run* run) {
  return run ? run->run.samples.size() : 0;
}

sgl_status sgl_tracking_run_sample(const sgl_tracking_run* run, size_t index,
                                   sgl_tracking_sample* sample) {
  return guarded([&] {
    require(run != nullptr && sample != nullptr, "null argument");
    require(index < run->run.samples.size(), "slot out of range");
    from_cpp(run->run.samples[index], sample);
  });
}

size_t sgl_tracking_run_checkpoints(const sgl_tracking_run* run) {
  return run ? run->run.checkpoints.size() : 0;
}

sgl_status sgl_tracking_run_checkpoint(const sgl_tracking_run* run, size_t index,
                                       sgl_checkpoint* checkpoint) {
  return guarded([&] {
    require(run != nullptr && checkpoint != nullptr, "null argument");
    require(index < run->run.checkpoints.size(), "checkpoint out of range");
    const auto& cp = run->run.checkpoints[index];
    checkpoint->t = cp.t;
    checkpoint->segment = cp.segment;
    checkpoint->settled = cp.settled ? 1 : 0;
    checkpoint->segment_end = cp.segment_end ? 1 : 0;
    checkpoint->objective_gap = cp.objective_gap;
    checkpoint->f_online = cp.f_online;
    checkpoint->f_batch = cp.f_batch;
    from_cpp(cp.sample, &checkpoint->sample);
  });
}

const sgl_edges* sgl_tracking_run_online(const sgl_tracking_run* run, size_t index) {
  return run ? element(run->online, index) : nullptr;
}

const sgl_edges* sgl_tracking_run_batch(const sgl_tracking_run* run, size_t index) {
  return run ? element(run->batch, index) : nullptr;
}

const sgl_edges* sgl_tracking_run_truth(const sgl_tracking_run* run, size_t segment) {
  return run ? element(run->truths, segment) : nullptr;
}

size_t sgl_tracking_run_segments(const sgl_tracking_run* run) {
  return run ? run->truths.size() : 0;
}

size_t sgl_tracking_run_violations(const sgl_tracking_run* run) {
  return run ? run->run.violations : 0;
}

}  // extern "C"
