#pragma once

#include <cstdint>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "sgl/graph.hpp"

namespace sgl::test {

inline Vector uniform_vector(std::mt19937_64& rng, Index size, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(size);
  for (Index k = 0; k < size; ++k) v[k] = u(rng);
  return v;
}

inline Matrix normal_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

inline EdgeVector random_edges(std::mt19937_64& rng, Index n, double lo = 0.1, double hi = 1.0) {
  return EdgeVector(n, uniform_vector(rng, pair_count(n), lo, hi));
}

// Dense Laplacian built pair by pair, independent of the library routine.
inline Matrix laplacian_by_hand(const EdgeVector& w) {
  const Index n = w.nodes();
  Matrix l = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double x = w.weight(i, j);
      l(i, j) -= x;
      l(j, i) -= x;
      l(i, i) += x;
      l(j, j) += x;
    }
  return l;
}

// Objective from dense matrices: ||W o Z||_1 - alpha 1'log(W1) + beta ||W||_F^2
// - gamma sum_k ||W o Z_k||_1.
inline double objective_by_matrix(const EdgeVector& w, const Matrix& z, const std::vector<Matrix>& others,
                                  double alpha, double beta, double gamma) {
  const Matrix a = w.adjacency();
  const Vector d = a.rowwise().sum();
  if ((d.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
  double f = a.cwiseProduct(z).sum() - alpha * d.array().log().sum() + beta * a.squaredNorm();
  for (const auto& zk : others) f -= gamma * a.cwiseProduct(zk).sum();
  return f;
}

inline Matrix distance_matrix(const Vector& z, Index n) {
  Matrix m = Matrix::Zero(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j, ++k) m(i, j) = m(j, i) = z[k];
  return m;
}

// Projected gradient with a fixed small step and an explicit 0/1 degree
// matrix built from scratch. `linear` is the full gradient of the linear part.
inline Vector projected_gradient_oracle(Index n, const Vector& linear, double alpha, double beta,
                                        double step, std::size_t iterations, Vector w) {
  const Index m = n * (n - 1) / 2;
  Matrix s = Matrix::Zero(n, m);
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j, ++k) s(i, k) = s(j, k) = 1.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const Vector d = s * w;
    const Vector g = 4.0 * beta * w - alpha * s.transpose() * d.cwiseInverse() + linear;
    w = (w - step * g).cwiseMax(0.0);
  }
  return w;
}

}  // namespace sgl::test
