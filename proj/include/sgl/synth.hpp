#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sgl/graph.hpp"

namespace sgl {

// splitmix64 of the seed combined with two salts.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

struct ErdosRenyi {
  double p = 0.1;
};

struct BarabasiAlbert {
  Index m = 3;
};

struct GraphSpec {
  std::variant<ErdosRenyi, BarabasiAlbert> kind;
  Index n = 0;
  std::uint64_t seed = 0;
};

struct GeneratedGraph {
  EdgeVector edges;
  std::size_t retries = 0;  // salted regenerations needed for connectivity
};

bool is_connected(const EdgeVector& w, double threshold = 0.0);

// Unit-weight ER or BA graph, regenerated with a salted seed until connected
// (at most 100 retries).
GeneratedGraph gen_graph(const GraphSpec& spec);

struct RewireResult {
  EdgeVector edges;
  std::string warning;  // set when the request could not be honored
};

// Replaces floor(fraction |E|) random edges with as many pairs absent from
// the input graph.
RewireResult rewire(const EdgeVector& w, double fraction, std::uint64_t seed);

struct SignalResult {
  SignalMatrix signals;
  std::string warning;
};

// P columns drawn from N(0, pinv(L) + sigma^2 I).
SignalResult gen_smooth_signals(const EdgeVector& w, Index p, double sigma, std::uint64_t seed);

// Moore-Penrose pseudoinverse of a Laplacian; eigenvalues below 1e-9 count as zero.
Matrix laplacian_pseudoinverse(const Matrix& laplacian);

struct RewireOf {
  double fraction = 0.4;
  std::uint64_t seed = 0;
  bool require_connected = true;
};

struct StreamSegment {
  std::variant<GraphSpec, RewireOf> source;
  std::size_t duration = 1;
};

struct StreamSpec {
  std::vector<StreamSegment> segments;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

class SyntheticStream {
 public:
  SyntheticStream(std::vector<EdgeVector> truths, std::vector<SignalMatrix> signals);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_segments() const { return truths_.size(); }
  Index nodes() const { return truths_.front().nodes(); }
  const EdgeVector& truth(std::size_t segment) const { return truths_.at(segment); }
  // First time index (0-based) of each segment.
  std::size_t segment_start(std::size_t segment) const { return starts_.at(segment); }
  std::size_t segment_of(std::size_t t) const;
  Vector signal(std::size_t t) const;
  const SignalMatrix& segment_signals(std::size_t segment) const { return signals_.at(segment); }

 private:
  std::vector<EdgeVector> truths_;
  std::vector<SignalMatrix> signals_;
  std::vector<std::size_t> starts_;
  std::size_t horizon_ = 0;
};

// Piecewise-constant stream; segment s draws its signals with seed
// spec.seed for s = 0 and derive_seed(spec.seed, s) afterwards.
SyntheticStream gen_stream(const StreamSpec& spec);

}  // namespace sgl
