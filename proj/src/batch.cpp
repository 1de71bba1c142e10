#include "sgl/batch.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sgl/error.hpp"

namespace sgl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void LearnConfig::validate(Index n) const {
  if (!(alpha > 0.0)) fail(ErrorCode::kInvalidArgument, "alpha must be > 0");
  if (!(beta > 0.0)) fail(ErrorCode::kInvalidArgument, "beta must be > 0");
  if (!(gamma >= 0.0)) fail(ErrorCode::kInvalidArgument, "gamma must be >= 0");
  if (!(d_min > 0.0)) fail(ErrorCode::kInvalidArgument, "d_min must be > 0");
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tol must be > 0");
  if (max_iter == 0) fail(ErrorCode::kInvalidArgument, "max_iter must be >= 1");
  if (!(edge_threshold >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "edge_threshold must be >= 0");
  }
  if (n < 2) fail(ErrorCode::kInvalidArgument, "graphs need at least two nodes");
  if (step) {
    const double limit = 2.0 / lipschitz_constant(*this, n);
    if (!(*step > 0.0) || *step > limit * (1.0 + 1e-12)) {
      fail(ErrorCode::kInvalidArgument,
           "step must lie in (0, 2/eta] = (0, " + std::to_string(limit) + "]");
    }
  }
}

double lipschitz_bound(double alpha, double beta, Index n, double min_degree) {
  return 4.0 * beta + 2.0 * alpha * static_cast<double>(n - 1) / (min_degree * min_degree);
}

double lipschitz_constant(const LearnConfig& config, Index n) {
  return lipschitz_bound(config.alpha, config.beta, n, config.d_min);
}

double resolved_step(const LearnConfig& config, Index n) {
  return config.step ? *config.step : 2.0 / lipschitz_constant(config, n);
}

double degree_floor(const LearnConfig& config) {
  return 1e-9 * std::max(1.0, config.d_min);
}

DiscriminativeProblem::DiscriminativeProblem(DistanceVector own,
                                             std::vector<DistanceVector> others,
                                             LearnConfig config)
    : own_(std::move(own)), others_(std::move(others)), config_(std::move(config)) {
  const Index n = own_.nodes();
  config_.validate(n);
  linear_ = own_.values();
  for (const auto& z : others_) {
    if (z.nodes() != n) {
      fail(ErrorCode::kDimensionMismatch, "all distance vectors must share the node count");
    }
    if (config_.gamma != 0.0) linear_ -= config_.gamma * z.values();
  }
  linear_ *= 2.0;
  if (!linear_.allFinite()) fail(ErrorCode::kInput, "distance vectors must be finite");
}

DiscriminativeProblem DiscriminativeProblem::from_datasets(
    const std::vector<SignalMatrix>& classes, std::size_t target,
    const LearnConfig& config) {
  if (target >= classes.size()) fail(ErrorCode::kInvalidArgument, "target class out of range");
  const Index n = classes[target].nodes();
  auto build = [&](const SignalMatrix& x) {
    if (x.nodes() != n) fail(ErrorCode::kDimensionMismatch, "datasets disagree on node count");
    if (x.signals() == 0) fail(ErrorCode::kInput, "a class has no signals");
    DistanceVector z = distance_vector(x);
    if (config.normalize_distances) z.values() /= static_cast<double>(x.signals());
    return z;
  };
  DistanceVector own = build(classes[target]);
  std::vector<DistanceVector> others;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (c != target) others.push_back(build(classes[c]));
  }
  return DiscriminativeProblem(std::move(own), std::move(others), config);
}

double smooth_objective(const Vector& w, Index n, double alpha, double beta) {
  const Vector d = apply_degree_operator(w, n);
  double barrier = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (!(d[i] > 0.0)) return kInf;
    barrier += std::log(d[i]);
  }
  return -alpha * barrier + 2.0 * beta * w.squaredNorm();
}

double objective(const Vector& w, const DiscriminativeProblem& problem) {
  if (w.size() != problem.own().size()) {
    fail(ErrorCode::kDimensionMismatch, "edge vector and problem sizes differ");
  }
  if ((w.array() < 0.0).any()) return kInf;
  const auto& cfg = problem.config();
  const double smooth = smooth_objective(w, problem.nodes(), cfg.alpha, cfg.beta);
  if (!std::isfinite(smooth)) return kInf;
  return smooth + w.dot(problem.linear_term());
}

double objective(const EdgeVector& w, const DiscriminativeProblem& problem) {
  if (w.nodes() != problem.nodes()) {
    fail(ErrorCode::kDimensionMismatch, "edge vector and problem node counts differ");
  }
  return objective(w.weights(), problem);
}

GradientResult grad_smooth(const Vector& w, Index n, double alpha, double beta,
                           double floor) {
  Vector d = apply_degree_operator(w, n);
  bool clamped = false;
  for (Index i = 0; i < n; ++i) {
    if (d[i] < floor) {
      d[i] = floor;
      clamped = true;
    }
  }
  const Vector inv = d.cwiseInverse();
  GradientResult out;
  out.gradient = 4.0 * beta * w - alpha * apply_degree_operator_transpose(inv, n);
  out.clamped = clamped;
  return out;
}

Vector grad_smooth(const EdgeVector& w, const LearnConfig& config) {
  const double floor = degree_floor(config);
  const Vector d = degrees(w);
  if ((d.array() <= floor).any()) {
    fail(ErrorCode::kDegenerateDegree, "a node degree is at or below the degree floor");
  }
  return grad_smooth(w.weights(), w.nodes(), config.alpha, config.beta, floor).gradient;
}

Vector prox_nonsmooth(const Vector& v, const Vector& thresholds) {
  if (v.size() != thresholds.size()) {
    fail(ErrorCode::kDimensionMismatch, "prox argument and thresholds differ in size");
  }
  return (v - thresholds).cwiseMax(0.0);
}

EdgeVector default_initialization(Index n, const LearnConfig& config) {
  const double degree = std::max(config.d_min, 1.0);
  return EdgeVector(n, Vector::Constant(pair_count(n), degree / static_cast<double>(n - 1)));
}

BatchResult learn_batch(const DiscriminativeProblem& problem,
                        const std::optional<EdgeVector>& w0,
                        const IterationObserver& observer) {
  const Index n = problem.nodes();
  const LearnConfig& cfg = problem.config();
  const double floor = degree_floor(cfg);
  const Vector& linear = problem.linear_term();

  double mu = resolved_step(cfg, n);
  // Momentum needs a step no larger than 1/eta.
  if (cfg.accelerated) mu = std::min(mu, 1.0 / lipschitz_constant(cfg, n));

  Vector w = w0 ? w0->weights() : default_initialization(n, cfg).weights();
  if (w0 && w0->nodes() != n) {
    fail(ErrorCode::kDimensionMismatch, "initial edge vector has the wrong node count");
  }
  double f = objective(w, problem);

  Vector best = w;
  double best_f = f;
  BatchDiagnostics diag;

  auto prox_step = [&](const Vector& point) {
    GradientResult g = grad_smooth(point, n, cfg.alpha, cfg.beta, floor);
    diag.clamping_activated = diag.clamping_activated || g.clamped;
    return Vector((point - mu * (g.gradient + linear)).cwiseMax(0.0));
  };

  Vector y = w;
  double momentum = 1.0;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    Vector next = prox_step(cfg.accelerated ? y : w);
    double next_f = objective(next, problem);
    if (cfg.accelerated && next_f > f && momentum > 1.0) {
      // Function-value restart.
      ++diag.restarts;
      momentum = 1.0;
      next = prox_step(w);
      next_f = objective(next, problem);
    }
    const double change = (next - w).norm() / std::max(w.norm(), 1e-12);
    if (cfg.accelerated) {
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = next + ((momentum - 1.0) / next_momentum) * (next - w);
      momentum = next_momentum;
    }
    w = std::move(next);
    f = next_f;
    diag.iterations = it;
    if (f < best_f) {
      best_f = f;
      best = w;
    }
    if (observer) observer(it, w, f);
    if (change < cfg.tol) {
      diag.converged = true;
      break;
    }
  }

  if (!diag.converged) {
    w = best;
    f = best_f;
  }
  diag.final_objective = f;
  return {EdgeVector(n, std::move(w)), diag};
}

Stationarity stationarity(const EdgeVector& w, const DiscriminativeProblem& problem) {
  const LearnConfig& cfg = problem.config();
  const Vector r =
      grad_smooth(w.weights(), w.nodes(), cfg.alpha, cfg.beta, degree_floor(cfg)).gradient +
      problem.linear_term();
  Stationarity s;
  s.min_inactive_residual = kInf;
  for (Index k = 0; k < r.size(); ++k) {
    if (w[k] > cfg.edge_threshold) {
      s.max_active_residual = std::max(s.max_active_residual, std::abs(r[k]));
    } else if (w[k] == 0.0) {
      s.min_inactive_residual = std::min(s.min_inactive_residual, r[k]);
    }
  }
  if (!std::isfinite(s.min_inactive_residual)) s.min_inactive_residual = 0.0;
  return s;
}

}  // namespace sgl
