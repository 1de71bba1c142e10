#include "sgl/classifier.hpp"

#include <cmath>
#include <future>

#include "sgl/error.hpp"

namespace sgl {

ClassifierModel::ClassifierModel(std::vector<ClassGraph> classes, std::size_t bandwidth,
                                 bool normalized)
    : classes_(std::move(classes)), bandwidth_(bandwidth), normalized_(normalized) {
  if (classes_.size() < 2) fail(ErrorCode::kInvalidArgument, "a classifier needs >= 2 classes");
  const Index n = classes_.front().basis.eigenvalues.size();
  for (const auto& c : classes_) {
    if (c.basis.eigenvalues.size() != n || c.basis.eigenvectors.rows() != n ||
        c.basis.eigenvectors.cols() != n || c.edges.nodes() != n) {
      fail(ErrorCode::kDimensionMismatch, "class bases disagree on the node count");
    }
  }
  if (bandwidth_ < 1 || bandwidth_ > static_cast<std::size_t>(n)) {
    fail(ErrorCode::kInvalidArgument, "bandwidth must lie in 1..N");
  }
}

const ClassGraph& ClassifierModel::graph(std::size_t c) const {
  if (c >= classes_.size()) fail(ErrorCode::kInvalidArgument, "unknown class label");
  return classes_[c];
}

std::size_t default_bandwidth(Index n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(n / 3));
}

namespace {

ClassGraph train_class(const std::vector<SignalMatrix>& datasets, std::size_t c,
                       const LearnConfig& config, bool normalize) {
  const DiscriminativeProblem problem =
      DiscriminativeProblem::from_datasets(datasets, c, config);
  BatchResult result = learn_batch(problem);
  ClassGraph g;
  g.diagnostics = result.diagnostics;
  g.edges = result.weights.pruned(config.edge_threshold);
  if (normalize) {
    // ||W||_F = sqrt(2) ||w||
    const double frob = std::sqrt(2.0) * g.edges.weights().norm();
    if (frob > 0.0) g.edges = EdgeVector(g.edges.nodes(), g.edges.weights() / frob);
  }
  g.basis = gft_decompose(laplacian(g.edges));
  return g;
}

}  // namespace

ClassifierModel fit(const std::vector<SignalMatrix>& datasets, const LearnConfig& config,
                    const FitOptions& options) {
  if (datasets.size() < 2) fail(ErrorCode::kInvalidArgument, "fit needs >= 2 classes");
  const Index n = datasets.front().nodes();
  for (const auto& x : datasets) {
    if (x.nodes() != n) fail(ErrorCode::kDimensionMismatch, "datasets disagree on node count");
    if (x.signals() == 0) fail(ErrorCode::kInput, "a class has no signals");
  }
  config.validate(n);
  if (!options.labels.empty() && options.labels.size() != datasets.size()) {
    fail(ErrorCode::kInvalidArgument, "one label per class is required");
  }

  std::vector<ClassGraph> graphs(datasets.size());
  if (options.parallel) {
    std::vector<std::future<ClassGraph>> jobs;
    for (std::size_t c = 0; c < datasets.size(); ++c) {
      jobs.push_back(std::async(std::launch::async, train_class, std::cref(datasets), c,
                                std::cref(config), options.normalize_frobenius));
    }
    for (std::size_t c = 0; c < jobs.size(); ++c) graphs[c] = jobs[c].get();
  } else {
    for (std::size_t c = 0; c < datasets.size(); ++c) {
      graphs[c] = train_class(datasets, c, config, options.normalize_frobenius);
    }
  }
  for (std::size_t c = 0; c < graphs.size(); ++c) {
    graphs[c].label = options.labels.empty() ? std::to_string(c) : options.labels[c];
  }
  const std::size_t bandwidth =
      options.bandwidth == 0 ? default_bandwidth(n) : options.bandwidth;
  return ClassifierModel(std::move(graphs), bandwidth, options.normalize_frobenius);
}

double lowpass_energy(const GftBasis& basis, std::size_t bandwidth, const Vector& x) {
  if (basis.eigenvectors.rows() != x.size()) {
    fail(ErrorCode::kDimensionMismatch, "basis and signal sizes differ");
  }
  const auto w = static_cast<Index>(bandwidth);
  return (basis.eigenvectors.leftCols(w).transpose() * x).squaredNorm();
}

double lowpass_energy(const ClassifierModel& model, std::size_t cls, const Vector& x) {
  return lowpass_energy(model.graph(cls).basis, model.bandwidth(), x);
}

Vector cumulative_relative_energy(const GftBasis& basis, const Vector& x) {
  const Vector coeffs = gft_project(basis, x);
  Vector out(coeffs.size());
  const double total = x.squaredNorm();
  double running = 0.0;
  for (Index k = 0; k < coeffs.size(); ++k) {
    running += coeffs[k] * coeffs[k];
    out[k] = total > 0.0 ? running / total : 0.0;
  }
  return out;
}

Classification classify(const ClassifierModel& model, const Vector& x) {
  Classification out;
  out.energies.reserve(model.num_classes());
  for (std::size_t c = 0; c < model.num_classes(); ++c) {
    out.energies.push_back(lowpass_energy(model, c, x));
  }
  for (std::size_t c = 1; c < out.energies.size(); ++c) {
    if (out.energies[c] > out.energies[out.label]) out.label = c;
  }
  for (std::size_t c = 0; c < out.energies.size(); ++c) {
    if (c != out.label && out.energies[c] == out.energies[out.label]) out.tie = true;
  }
  return out;
}

}  // namespace sgl
