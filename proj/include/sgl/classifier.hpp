#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sgl/batch.hpp"

namespace sgl {

struct ClassGraph {
  std::string label;
  EdgeVector edges;  // learned graph after pruning (and optional rescaling)
  GftBasis basis;
  BatchDiagnostics diagnostics;
};

struct FitOptions {
  std::size_t bandwidth = 0;      // 0 selects floor(N/3), at least 1
  bool normalize_frobenius = false;
  bool parallel = false;          // train class problems concurrently
  std::vector<std::string> labels;  // defaults to "0", "1", ...
};

// Low-pass filter bank over class-conditional GFT bases.
class ClassifierModel {
 public:
  ClassifierModel(std::vector<ClassGraph> classes, std::size_t bandwidth, bool normalized);

  std::size_t num_classes() const { return classes_.size(); }
  Index nodes() const { return classes_.front().basis.eigenvalues.size(); }
  std::size_t bandwidth() const { return bandwidth_; }
  bool normalized() const { return normalized_; }
  const ClassGraph& graph(std::size_t c) const;
  const std::vector<ClassGraph>& graphs() const { return classes_; }

 private:
  std::vector<ClassGraph> classes_;
  std::size_t bandwidth_;
  bool normalized_;
};

std::size_t default_bandwidth(Index n);

ClassifierModel fit(const std::vector<SignalMatrix>& datasets, const LearnConfig& config,
                    const FitOptions& options = {});

// Energy of the projection onto the `bandwidth` lowest-frequency eigenvectors.
double lowpass_energy(const ClassifierModel& model, std::size_t cls, const Vector& x);
double lowpass_energy(const GftBasis& basis, std::size_t bandwidth, const Vector& x);

// Cumulative energy of the GFT coefficients divided by ||x||^2; entry k
// covers the first k+1 coefficients. All zeros for x = 0.
Vector cumulative_relative_energy(const GftBasis& basis, const Vector& x);

struct Classification {
  std::size_t label = 0;
  std::vector<double> energies;
  bool tie = false;  // label chosen by lowest index among equal energies
};

Classification classify(const ClassifierModel& model, const Vector& x);

}  // namespace sgl
