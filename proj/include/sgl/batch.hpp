#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "sgl/graph.hpp"

namespace sgl {

struct LearnConfig {
  double alpha = 1.0;  // log-barrier weight
  double beta = 0.1;   // Frobenius weight
  double gamma = 0.0;  // discriminative weight
  double d_min = 1.0;  // degree floor used by the Lipschitz constant
  std::optional<double> step;  // defaults to 2 / lipschitz_constant
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  bool accelerated = false;
  double edge_threshold = 1e-3;
  // Divide each class distance vector by its signal count when building a
  // problem from data.
  bool normalize_distances = false;

  // Throws kInvalidArgument when a field is out of range for `n` nodes.
  void validate(Index n) const;
};

// eta = 4 beta + 2 alpha (N-1) / d_min^2
double lipschitz_constant(const LearnConfig& config, Index n);
// Same expression with an arbitrary minimum degree in place of d_min.
double lipschitz_bound(double alpha, double beta, Index n, double min_degree);

// Step used by the batch solver: config.step or 2/eta.
double resolved_step(const LearnConfig& config, Index n);

// Gradient evaluation clamps degrees at this floor.
double degree_floor(const LearnConfig& config);

// Per-class composite problem: smoothness on z_c, repulsion from z_k.
class DiscriminativeProblem {
 public:
  DiscriminativeProblem(DistanceVector own, std::vector<DistanceVector> others,
                        LearnConfig config);

  // Builds z_c and every z_k (k != target) from per-class datasets.
  static DiscriminativeProblem from_datasets(const std::vector<SignalMatrix>& classes,
                                             std::size_t target,
                                             const LearnConfig& config);

  Index nodes() const { return own_.nodes(); }
  const DistanceVector& own() const { return own_; }
  const std::vector<DistanceVector>& others() const { return others_; }
  const LearnConfig& config() const { return config_; }

  // 2 (z_c - gamma sum_k z_k); the prox threshold is step times this.
  const Vector& linear_term() const { return linear_; }

 private:
  DistanceVector own_;
  std::vector<DistanceVector> others_;
  LearnConfig config_;
  Vector linear_;
};

// F(w); +inf outside the domain (negative weight or nonpositive degree).
double objective(const EdgeVector& w, const DiscriminativeProblem& problem);
double objective(const Vector& w, const DiscriminativeProblem& problem);

// Smooth part g(w) = -alpha 1'log(Sw) + 2 beta ||w||^2; +inf when a degree <= 0.
double smooth_objective(const Vector& w, Index n, double alpha, double beta);

struct GradientResult {
  Vector gradient;
  bool clamped = false;  // some degree fell below the floor
};

// 4 beta w - alpha S'(1/Sw) with Sw clamped at `floor`.
GradientResult grad_smooth(const Vector& w, Index n, double alpha, double beta,
                           double floor);
// Strict form: throws kDegenerateDegree when a degree is <= degree_floor.
Vector grad_smooth(const EdgeVector& w, const LearnConfig& config);

// max(0, v - thresholds)
Vector prox_nonsmooth(const Vector& v, const Vector& thresholds);

struct BatchDiagnostics {
  std::size_t iterations = 0;
  double final_objective = 0.0;
  bool converged = false;
  bool clamping_activated = false;
  std::size_t restarts = 0;
};

struct BatchResult {
  EdgeVector weights;
  BatchDiagnostics diagnostics;
};

// Uniform weights with every degree equal to max(d_min, 1).
EdgeVector default_initialization(Index n, const LearnConfig& config);

// Called after every iteration with the iteration count, the new iterate and
// its objective.
using IterationObserver = std::function<void(std::size_t, const Vector&, double)>;

// Proximal gradient with optional momentum and function-value restart.
BatchResult learn_batch(const DiscriminativeProblem& problem,
                        const std::optional<EdgeVector>& w0 = std::nullopt,
                        const IterationObserver& observer = {});

struct Stationarity {
  double max_active_residual = 0.0;   // max |grad + linear| over w_i > threshold
  double min_inactive_residual = 0.0; // min (grad + linear) over w_i == 0
};

// First-order optimality residuals of w for the composite problem.
Stationarity stationarity(const EdgeVector& w, const DiscriminativeProblem& problem);

}  // namespace sgl
