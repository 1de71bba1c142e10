#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sgl/types.hpp"

namespace sgl {

// Lexicographic (i<j) index of an unordered node pair. Throws kInvalidPair
// unless 0 <= i < j < n.
Index pair_index(Index i, Index j, Index n);

// Inverse of pair_index.
std::pair<Index, Index> pair_nodes(Index k, Index n);

// Upper-triangular nonnegative edge weights of an undirected graph without
// self loops, in pair_index order.
class EdgeVector {
 public:
  EdgeVector() = default;
  // All-zero graph on n nodes.
  explicit EdgeVector(Index n);
  // Validates length and nonnegativity.
  EdgeVector(Index n, Vector weights);

  Index nodes() const { return n_; }
  Index size() const { return w_.size(); }
  const Vector& weights() const { return w_; }

  double operator[](Index k) const { return w_[k]; }
  double weight(Index i, Index j) const;
  void set_weight(Index i, Index j, double value);

  // Copy with every weight strictly below `threshold` set to zero.
  EdgeVector pruned(double threshold) const;
  // Pairs whose weight is >= threshold (and > 0).
  std::vector<std::pair<Index, Index>> edges(double threshold) const;
  Index edge_count(double threshold) const;

  // Dense symmetric adjacency with zero diagonal.
  Matrix adjacency() const;

  friend bool operator==(const EdgeVector&, const EdgeVector&) = default;

 private:
  Index n_ = 0;
  Vector w_;
};

// Vectorized pairwise squared distances between node measurement rows.
class DistanceVector {
 public:
  DistanceVector() = default;
  explicit DistanceVector(Index n);
  DistanceVector(Index n, Vector z);

  Index nodes() const { return n_; }
  Index size() const { return z_.size(); }
  const Vector& values() const { return z_; }
  Vector& values() { return z_; }

 private:
  Index n_ = 0;
  Vector z_;
};

// N x P data matrix, one graph signal per column.
class SignalMatrix {
 public:
  SignalMatrix() = default;
  explicit SignalMatrix(Matrix data);

  Index nodes() const { return data_.rows(); }
  Index signals() const { return data_.cols(); }
  const Matrix& data() const { return data_; }
  Vector signal(Index p) const { return data_.col(p); }

 private:
  Matrix data_;
};

struct GftBasis {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]
};

// d = S w: nodal degrees.
Vector degrees(const EdgeVector& w);
// Applies S to an arbitrary (possibly negative) pair vector.
Vector apply_degree_operator(const Vector& w, Index n);
// S^T v: entry (i,j) equals v_i + v_j.
Vector apply_degree_operator_transpose(const Vector& v, Index n);
// Explicit N x N(N-1)/2 0/1 matrix S with S w = W 1.
Matrix degree_operator(Index n);

DistanceVector distance_vector(const SignalMatrix& x);
// (x_i - x_j)^2 for a single signal.
DistanceVector distance_vector(std::span<const double> x);

Matrix laplacian(const EdgeVector& w);

double total_variation(const Matrix& laplacian, const Vector& x);

// Eigendecomposition of a symmetric Laplacian: ascending eigenvalues and
// eigenvectors whose first entry with magnitude > 1e-12 is positive.
GftBasis gft_decompose(const Matrix& laplacian);

Vector gft_project(const GftBasis& basis, const Vector& x);
Vector gft_inverse(const GftBasis& basis, const Vector& coefficients);

}  // namespace sgl
