#include "sgl/graph.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "sgl/error.hpp"

namespace sgl {

Index pair_index(Index i, Index j, Index n) {
  if (i < 0 || i >= j || j >= n) {
    fail(ErrorCode::kInvalidPair, "invalid node pair (" + std::to_string(i) +
                                      "," + std::to_string(j) + ") for n=" +
                                      std::to_string(n));
  }
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<Index, Index> pair_nodes(Index k, Index n) {
  if (k < 0 || k >= pair_count(n)) {
    fail(ErrorCode::kInvalidPair, "pair index out of range");
  }
  Index i = 0;
  Index row = n - 1;  // pairs starting at node i
  while (k >= row) {
    k -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + k};
}

EdgeVector::EdgeVector(Index n) : n_(n), w_(Vector::Zero(pair_count(n))) {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "edge vector needs n >= 2");
}

EdgeVector::EdgeVector(Index n, Vector weights) : n_(n), w_(std::move(weights)) {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "edge vector needs n >= 2");
  if (w_.size() != pair_count(n)) {
    fail(ErrorCode::kDimensionMismatch,
         "edge vector length " + std::to_string(w_.size()) + " != n(n-1)/2 = " +
             std::to_string(pair_count(n)));
  }
  for (Index k = 0; k < w_.size(); ++k) {
    if (!std::isfinite(w_[k]) || w_[k] < 0.0) {
      fail(ErrorCode::kInput, "edge weights must be finite and nonnegative");
    }
  }
}

double EdgeVector::weight(Index i, Index j) const {
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  return w_[pair_index(i, j, n_)];
}

void EdgeVector::set_weight(Index i, Index j, double value) {
  if (i > j) std::swap(i, j);
  if (!std::isfinite(value) || value < 0.0) {
    fail(ErrorCode::kInput, "edge weights must be finite and nonnegative");
  }
  w_[pair_index(i, j, n_)] = value;
}

EdgeVector EdgeVector::pruned(double threshold) const {
  EdgeVector out = *this;
  for (Index k = 0; k < out.w_.size(); ++k) {
    if (out.w_[k] < threshold) out.w_[k] = 0.0;
  }
  return out;
}

std::vector<std::pair<Index, Index>> EdgeVector::edges(double threshold) const {
  std::vector<std::pair<Index, Index>> out;
  Index k = 0;
  for (Index i = 0; i < n_; ++i) {
    for (Index j = i + 1; j < n_; ++j, ++k) {
      if (w_[k] > 0.0 && w_[k] >= threshold) out.emplace_back(i, j);
    }
  }
  return out;
}

Index EdgeVector::edge_count(double threshold) const {
  Index count = 0;
  for (Index k = 0; k < w_.size(); ++k) {
    if (w_[k] > 0.0 && w_[k] >= threshold) ++count;
  }
  return count;
}

Matrix EdgeVector::adjacency() const {
  Matrix a = Matrix::Zero(n_, n_);
  Index k = 0;
  for (Index i = 0; i < n_; ++i) {
    for (Index j = i + 1; j < n_; ++j, ++k) {
      a(i, j) = w_[k];
      a(j, i) = w_[k];
    }
  }
  return a;
}

DistanceVector::DistanceVector(Index n) : n_(n), z_(Vector::Zero(pair_count(n))) {}

DistanceVector::DistanceVector(Index n, Vector z) : n_(n), z_(std::move(z)) {
  if (z_.size() != pair_count(n)) {
    fail(ErrorCode::kDimensionMismatch, "distance vector length mismatch");
  }
}

SignalMatrix::SignalMatrix(Matrix data) : data_(std::move(data)) {
  if (!data_.allFinite()) fail(ErrorCode::kInput, "signal matrix has non-finite entries");
}

Vector apply_degree_operator(const Vector& w, Index n) {
  Vector d = Vector::Zero(n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++k) {
      d[i] += w[k];
      d[j] += w[k];
    }
  }
  return d;
}

Vector apply_degree_operator_transpose(const Vector& v, Index n) {
  Vector out(pair_count(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++k) out[k] = v[i] + v[j];
  }
  return out;
}

Vector degrees(const EdgeVector& w) { return apply_degree_operator(w.weights(), w.nodes()); }

Matrix degree_operator(Index n) {
  Matrix s = Matrix::Zero(n, pair_count(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Index k = pair_index(i, j, n);
      s(i, k) = 1.0;
      s(j, k) = 1.0;
    }
  }
  return s;
}

DistanceVector distance_vector(const SignalMatrix& x) {
  const Index n = x.nodes();
  if (x.signals() < 1) fail(ErrorCode::kInput, "distance vector needs at least one signal");
  const Matrix& data = x.data();
  if (!data.allFinite()) fail(ErrorCode::kInput, "signal matrix has non-finite entries");
  Vector z(pair_count(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++k) {
      z[k] = (data.row(i) - data.row(j)).squaredNorm();
    }
  }
  return DistanceVector(n, std::move(z));
}

DistanceVector distance_vector(std::span<const double> x) {
  const auto n = static_cast<Index>(x.size());
  Vector z(pair_count(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) fail(ErrorCode::kInput, "signal has non-finite entries");
    for (Index j = i + 1; j < n; ++j, ++k) {
      const double diff = x[i] - x[j];
      z[k] = diff * diff;
    }
  }
  return DistanceVector(n, std::move(z));
}

Matrix laplacian(const EdgeVector& w) {
  Matrix l = -w.adjacency();
  l.diagonal() = degrees(w);
  return l;
}

double total_variation(const Matrix& laplacian, const Vector& x) {
  if (laplacian.rows() != x.size() || laplacian.cols() != x.size()) {
    fail(ErrorCode::kDimensionMismatch, "laplacian and signal sizes differ");
  }
  return x.dot(laplacian * x);
}

GftBasis gft_decompose(const Matrix& laplacian) {
  if (laplacian.rows() != laplacian.cols()) {
    fail(ErrorCode::kInput, "laplacian must be square");
  }
  const double scale = std::max(1.0, laplacian.cwiseAbs().maxCoeff());
  if ((laplacian - laplacian.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    fail(ErrorCode::kInput, "laplacian must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kInput, "eigendecomposition failed");
  }
  GftBasis basis{solver.eigenvalues(), solver.eigenvectors()};
  for (Index k = 0; k < basis.eigenvectors.cols(); ++k) {
    auto column = basis.eigenvectors.col(k);
    for (Index i = 0; i < column.size(); ++i) {
      if (std::abs(column[i]) > 1e-12) {
        if (column[i] < 0.0) column *= -1.0;
        break;
      }
    }
  }
  return basis;
}

Vector gft_project(const GftBasis& basis, const Vector& x) {
  if (basis.eigenvectors.rows() != x.size()) {
    fail(ErrorCode::kDimensionMismatch, "basis and signal sizes differ");
  }
  return basis.eigenvectors.transpose() * x;
}

Vector gft_inverse(const GftBasis& basis, const Vector& coefficients) {
  if (basis.eigenvectors.cols() != coefficients.size()) {
    fail(ErrorCode::kDimensionMismatch, "basis and coefficient sizes differ");
  }
  return basis.eigenvectors * coefficients;
}

}  // namespace sgl
