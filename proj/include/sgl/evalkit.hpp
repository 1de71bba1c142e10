#pragma once

#include "sgl/graph.hpp"

namespace sgl {

struct EdgeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

// Precision/recall/F of the estimate's pruned edge set against the truth's.
// Throws kUndefined when the truth has no edges after pruning; an empty
// estimate scores 0.
EdgeScore edge_score(const EdgeVector& estimate, const EdgeVector& truth,
                     double threshold = 1e-3);
double f_measure(const EdgeVector& estimate, const EdgeVector& truth, double threshold = 1e-3);

// ||W_t - W_prev||_F / ||W_prev||_F
double relative_temporal_deviation(const EdgeVector& current, const EdgeVector& previous);

// Second-smallest Laplacian eigenvalue, clamped at zero.
double algebraic_connectivity(const EdgeVector& w);

enum class SeriesTransform { kLog, kRdtv };

// prices: N x T, row i the price series of node i. Output columns are the
// per-time graph signals (T columns for log, T-1 for rdtv).
SignalMatrix series_transform(const Matrix& prices, SeriesTransform mode);

}  // namespace sgl
