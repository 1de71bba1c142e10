#include "sgl/evalkit.hpp"

#include <cmath>

#include "sgl/error.hpp"

namespace sgl {

EdgeScore edge_score(const EdgeVector& estimate, const EdgeVector& truth, double threshold) {
  if (estimate.nodes() != truth.nodes()) {
    fail(ErrorCode::kDimensionMismatch, "estimate and truth have different node counts");
  }
  Index true_edges = 0;
  Index found = 0;
  Index hits = 0;
  for (Index k = 0; k < truth.size(); ++k) {
    const bool in_truth = truth[k] > 0.0 && truth[k] >= threshold;
    const bool in_estimate = estimate[k] > 0.0 && estimate[k] >= threshold;
    true_edges += in_truth;
    found += in_estimate;
    hits += in_truth && in_estimate;
  }
  if (true_edges == 0) fail(ErrorCode::kUndefined, "recall is undefined for an empty truth graph");
  EdgeScore s;
  s.recall = static_cast<double>(hits) / static_cast<double>(true_edges);
  s.precision = found == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(found);
  const double denom = s.precision + s.recall;
  s.f_measure = denom > 0.0 ? 2.0 * s.precision * s.recall / denom : 0.0;
  return s;
}

double f_measure(const EdgeVector& estimate, const EdgeVector& truth, double threshold) {
  return edge_score(estimate, truth, threshold).f_measure;
}

double relative_temporal_deviation(const EdgeVector& current, const EdgeVector& previous) {
  if (current.nodes() != previous.nodes()) {
    fail(ErrorCode::kDimensionMismatch, "graphs have different node counts");
  }
  const double base = previous.weights().norm();
  if (base == 0.0) fail(ErrorCode::kUndefined, "previous graph has no edges");
  // The sqrt(2) of the symmetric Frobenius norm cancels.
  return (current.weights() - previous.weights()).norm() / base;
}

double algebraic_connectivity(const EdgeVector& w) {
  const GftBasis basis = gft_decompose(laplacian(w));
  return std::max(0.0, basis.eigenvalues[1]);
}

SignalMatrix series_transform(const Matrix& prices, SeriesTransform mode) {
  if (!prices.allFinite() || (prices.array() <= 0.0).any()) {
    fail(ErrorCode::kInput, "prices must be finite and positive");
  }
  if (mode == SeriesTransform::kLog) return SignalMatrix(prices.array().log().matrix());
  const Index t = prices.cols();
  if (t < 2) fail(ErrorCode::kInput, "rdtv needs at least two time points");
  Matrix out(prices.rows(), t - 1);
  for (Index c = 1; c < t; ++c) {
    out.col(c - 1) =
        ((prices.col(c) - prices.col(c - 1)).array().abs() / prices.col(c - 1).array().abs())
            .matrix();
  }
  return SignalMatrix(std::move(out));
}

}  // namespace sgl
