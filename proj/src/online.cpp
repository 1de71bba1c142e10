#include "sgl/online.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgl/error.hpp"

namespace sgl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MemoryMode MemoryMode::ema(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "EMA discount must lie strictly inside (0,1)");
  }
  return MemoryMode(Kind::kEma, theta, 0);
}

MemoryMode MemoryMode::sliding(std::size_t window) {
  if (window < 1) fail(ErrorCode::kInvalidArgument, "sliding window must hold >= 1 signal");
  return MemoryMode(Kind::kSliding, 0.0, window);
}

MemoryMode MemoryMode::infinite() { return MemoryMode(Kind::kInfinite, 0.0, 0); }

OnlineLearner::OnlineLearner(Index n, std::size_t num_classes, LearnConfig config,
                             MemoryMode mode, std::size_t inner_iters)
    : n_(n), config_(std::move(config)), mode_(mode), inner_iters_(inner_iters) {
  config_.validate(n);
  if (num_classes < 1) fail(ErrorCode::kInvalidArgument, "need at least one class");
  if (inner_iters_ < 1) fail(ErrorCode::kInvalidArgument, "inner iterations must be >= 1");
  const EdgeVector init = default_initialization(n, config_);
  classes_.resize(num_classes);
  for (auto& c : classes_) {
    c.z_bar = DistanceVector(n);
    c.w = init;
    c.window_sum = Vector::Zero(pair_count(n));
  }
}

const OnlineLearner::ClassState& OnlineLearner::at(std::size_t cls) const {
  if (cls >= classes_.size()) fail(ErrorCode::kInvalidArgument, "unknown class label");
  return classes_[cls];
}

OnlineLearner::ClassState& OnlineLearner::at(std::size_t cls) {
  if (cls >= classes_.size()) fail(ErrorCode::kInvalidArgument, "unknown class label");
  return classes_[cls];
}

void OnlineLearner::warm_start(std::size_t cls, const SignalMatrix& signals) {
  ClassState& c = at(cls);
  if (signals.nodes() != n_) fail(ErrorCode::kDimensionMismatch, "warm-up signals have wrong size");
  if (signals.signals() == 0) return;
  const Matrix& data = signals.data();
  Vector sum = Vector::Zero(pair_count(n_));
  for (Index p = 0; p < data.cols(); ++p) {
    const Vector x = data.col(p);
    DistanceVector z = distance_vector(std::span<const double>(x.data(), x.size()));
    sum += z.values();
    if (mode_.kind() == MemoryMode::Kind::kSliding) {
      if (c.window.size() < mode_.window()) {
        c.window.push_back(z.values());
      } else {
        c.window[c.head] = z.values();
        c.head = (c.head + 1) % mode_.window();
      }
    }
  }
  if (mode_.kind() == MemoryMode::Kind::kSliding) {
    c.window_sum.setZero();
    for (const auto& v : c.window) c.window_sum += v;
    c.z_bar.values() = c.window_sum / static_cast<double>(c.window.size());
  } else {
    c.z_bar.values() = sum / static_cast<double>(data.cols());
  }
  if (mode_.kind() == MemoryMode::Kind::kInfinite) c.count = static_cast<std::uint64_t>(data.cols());
}

void OnlineLearner::update_distance(std::size_t cls, std::span<const double> x) {
  ClassState& c = at(cls);
  if (static_cast<Index>(x.size()) != n_) {
    fail(ErrorCode::kDimensionMismatch, "signal length differs from the node count");
  }
  const DistanceVector sample = distance_vector(x);
  const Vector& z = sample.values();
  ++c.count;
  switch (mode_.kind()) {
    case MemoryMode::Kind::kEma: {
      const double theta = mode_.theta();
      c.z_bar.values() = (1.0 - theta) * c.z_bar.values() + theta * z;
      break;
    }
    case MemoryMode::Kind::kInfinite: {
      const double t = static_cast<double>(c.count);
      c.z_bar.values() = ((t - 1.0) / t) * c.z_bar.values() + z / t;
      break;
    }
    case MemoryMode::Kind::kSliding: {
      const std::size_t cap = mode_.window();
      if (c.window.size() < cap) {
        c.window.push_back(z);
        c.window_sum += z;
        c.head = c.window.size() % cap;
      } else {
        c.window_sum += z - c.window[c.head];
        c.window[c.head] = z;
        c.head = (c.head + 1) % cap;
      }
      if (c.head == 0) {
        // Resynchronize the running sum once per full cycle.
        c.window_sum.setZero();
        for (const auto& v : c.window) c.window_sum += v;
      }
      c.z_bar.values() = (c.window_sum / static_cast<double>(c.window.size())).cwiseMax(0.0);
      break;
    }
  }
  ++t_;
}

double OnlineLearner::step_at(const Vector& w) const {
  if (fixed_step_) return resolved_step(config_, n_);
  const double min_degree =
      std::max(apply_degree_operator(w, n_).minCoeff(), degree_floor(config_));
  return 1.0 / lipschitz_bound(config_.alpha, config_.beta, n_, min_degree);
}

double OnlineLearner::adaptive_step(std::size_t cls) const { return step_at(at(cls).w.weights()); }

Vector OnlineLearner::threshold_base(std::size_t cls) const {
  Vector base = at(cls).z_bar.values();
  if (config_.gamma != 0.0) {
    for (std::size_t k = 0; k < classes_.size(); ++k) {
      if (k != cls) base -= config_.gamma * classes_[k].z_bar.values();
    }
  }
  return 2.0 * base;
}

std::vector<StepRecord> OnlineLearner::step(std::size_t cls) {
  ClassState& c = at(cls);
  const Vector base = threshold_base(cls);
  const double floor = degree_floor(config_);
  std::vector<StepRecord> records;
  records.reserve(inner_iters_);
  Vector w = c.w.weights();
  for (std::size_t k = 0; k < inner_iters_; ++k) {
    StepRecord rec;
    rec.min_degree = apply_degree_operator(w, n_).minCoeff();
    rec.step = step_at(w);
    GradientResult g = grad_smooth(w, n_, config_.alpha, config_.beta, floor);
    rec.clamped = g.clamped;
    c.clamped = c.clamped || g.clamped;
    w = (w - rec.step * (g.gradient + base)).cwiseMax(0.0);
    records.push_back(rec);
  }
  c.w = EdgeVector(n_, std::move(w));
  return records;
}

std::vector<StepRecord> OnlineLearner::ingest(std::size_t cls, std::span<const double> x) {
  update_distance(cls, x);
  return step(cls);
}

DiscriminativeProblem OnlineLearner::problem(std::size_t cls) const {
  std::vector<DistanceVector> others;
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    if (k != cls) others.push_back(classes_[k].z_bar);
  }
  return DiscriminativeProblem(at(cls).z_bar, std::move(others), config_);
}

double OnlineLearner::objective(std::size_t cls) const {
  return sgl::objective(at(cls).w, problem(cls));
}

OnlineDiagnostics OnlineLearner::diagnostics(std::size_t cls) const {
  const ClassState& c = at(cls);
  OnlineDiagnostics d;
  d.t = t_;
  d.objective = objective(cls);
  d.step = adaptive_step(cls);
  d.min_degree = degrees(c.w).minCoeff();
  d.clamped = c.clamped;
  return d;
}

void OnlineLearner::set_edges(std::size_t cls, EdgeVector w) {
  if (w.nodes() != n_) fail(ErrorCode::kDimensionMismatch, "edge vector has the wrong node count");
  at(cls).w = std::move(w);
}

std::size_t OnlineLearner::state_size() const {
  std::size_t total = 0;
  for (const auto& c : classes_) {
    total += static_cast<std::size_t>(c.z_bar.size() + c.w.size() + c.window_sum.size());
    for (const auto& v : c.window) total += static_cast<std::size_t>(v.size());
  }
  return total;
}

double contraction_factor(double step, double beta, double eta) {
  return std::max(std::abs(1.0 - 4.0 * step * beta), std::abs(1.0 - step * eta));
}

std::vector<BoundPoint> tracking_bound(std::span<const double> contraction,
                                       std::span<const std::size_t> inner_iters,
                                       std::span<const double> variation,
                                       double initial_distance) {
  if (contraction.size() != variation.size() ||
      (!inner_iters.empty() && inner_iters.size() != contraction.size())) {
    fail(ErrorCode::kDimensionMismatch, "tracking histories must have equal length");
  }
  TrackingBound acc(initial_distance);
  std::vector<BoundPoint> out;
  out.reserve(contraction.size() + 1);
  out.push_back({acc.bound(), acc.simplified(), acc.degenerate()});
  for (std::size_t t = 0; t < contraction.size(); ++t) {
    const double iters = inner_iters.empty() ? 1.0 : static_cast<double>(inner_iters[t]);
    acc.advance(std::pow(contraction[t], iters), variation[t], contraction[t]);
    out.push_back({acc.bound(), acc.simplified(), acc.degenerate()});
  }
  return out;
}

TrackingBound::TrackingBound(double initial_distance)
    : initial_(initial_distance), bound_(initial_distance) {}

void TrackingBound::advance(double contraction_power, double variation, double max_factor) {
  bound_ = contraction_power * bound_ + variation;
  effective_max_ = std::max(effective_max_, contraction_power);
  max_factor_ = std::max(max_factor_, max_factor);
  max_variation_ = std::max(max_variation_, variation);
  ++t_;
}

double TrackingBound::simplified() const {
  if (t_ == 1) return initial_;
  if (effective_max_ >= 1.0) return kInf;
  return std::pow(effective_max_, static_cast<double>(t_)) * initial_ +
         max_variation_ / (1.0 - effective_max_);
}

Tracker::Tracker(OnlineLearner learner, LearnConfig oracle_config)
    : learner_(std::move(learner)), oracle_config_(std::move(oracle_config)) {
  if (learner_.num_classes() != 1) {
    fail(ErrorCode::kInvalidArgument, "the tracker follows a single-class stream");
  }
  oracle_config_.alpha = learner_.config().alpha;
  oracle_config_.beta = learner_.config().beta;
  oracle_config_.gamma = learner_.config().gamma;
  oracle_config_.validate(learner_.nodes());
}

TrackingSample Tracker::ingest(std::span<const double> x) {
  learner_.update_distance(0, x);
  const DiscriminativeProblem online = learner_.problem(0);
  const DiscriminativeProblem frozen(online.own(), online.others(), oracle_config_);

  const EdgeVector& warm = started_ ? optimum_ : learner_.edges(0);
  EdgeVector next_optimum = learn_batch(frozen, warm).weights;
  const EdgeVector& w = learner_.edges(0);
  const double distance = (w.weights() - next_optimum.weights()).norm();

  if (!started_) {
    bound_ = TrackingBound(distance);
    started_ = true;
  } else {
    const double variation = (next_optimum.weights() - optimum_.weights()).norm();
    bound_.advance(pending_contraction_, variation, pending_max_factor_);
  }
  optimum_ = std::move(next_optimum);

  TrackingSample s;
  s.t = learner_.time();
  s.distance = distance;
  s.bound = bound_.bound();
  s.simplified_bound = bound_.simplified();
  s.objective = sgl::objective(w, online);
  s.optimum = sgl::objective(optimum_, online);
  s.degenerate = bound_.degenerate();
  if (s.distance > s.bound + 1e-9) ++violations_;

  // Contraction of this slot's updates holds over the segment between the
  // iterate and the fixed point, so eta covers both endpoints' degrees.
  const double optimum_min_degree = degrees(optimum_).minCoeff();
  const auto records = learner_.step(0);
  const auto& cfg = learner_.config();
  pending_contraction_ = 1.0;
  pending_max_factor_ = 0.0;
  for (const auto& rec : records) {
    const double min_degree =
        std::max(std::min(rec.min_degree, optimum_min_degree), degree_floor(cfg));
    const double eta = lipschitz_bound(cfg.alpha, cfg.beta, learner_.nodes(), min_degree);
    const double factor = contraction_factor(rec.step, cfg.beta, eta);
    pending_contraction_ *= factor;
    pending_max_factor_ = std::max(pending_max_factor_, factor);
    s.clamped = s.clamped || rec.clamped;
  }
  s.contraction = pending_contraction_;
  return s;
}

}  // namespace sgl
