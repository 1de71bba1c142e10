#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sgl/batch.hpp"

namespace sgl {

// How the running distance statistic forgets the past.
class MemoryMode {
 public:
  enum class Kind { kEma, kSliding, kInfinite };

  static MemoryMode ema(double theta);
  static MemoryMode sliding(std::size_t window);
  static MemoryMode infinite();

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  std::size_t window() const { return window_; }

 private:
  MemoryMode(Kind kind, double theta, std::size_t window)
      : kind_(kind), theta_(theta), window_(window) {}

  Kind kind_;
  double theta_;
  std::size_t window_;
};

struct StepRecord {
  double step = 0.0;        // mu used for this update
  double min_degree = 0.0;  // min(S w) of the point the gradient was taken at
  bool clamped = false;
};

struct OnlineDiagnostics {
  std::uint64_t t = 0;
  double objective = 0.0;  // F_t at the current iterate
  double step = 0.0;       // adaptive step at the current iterate
  double min_degree = 0.0;
  bool clamped = false;    // clamping ever activated for this class
};

// Streaming discriminative graph tracker. One object owns every class's
// running distances so thresholds read the other classes consistently.
// Single writer; copy the object to take a snapshot.
class OnlineLearner {
 public:
  OnlineLearner(Index n, std::size_t num_classes, LearnConfig config, MemoryMode mode,
                std::size_t inner_iters = 1);

  // Seeds the running statistic of `cls` from pre-stream signals.
  void warm_start(std::size_t cls, const SignalMatrix& signals);

  // Folds one signal into the class statistic and advances time.
  void update_distance(std::size_t cls, std::span<const double> x);

  // mu_t = (4 beta + 2 alpha (N-1) / min(S w)^2)^-1 at the current iterate.
  double adaptive_step(std::size_t cls) const;

  // Runs inner_iters prox-gradient updates for `cls` against the current
  // statistics. Returns one record per update.
  std::vector<StepRecord> step(std::size_t cls);

  // update_distance followed by step.
  std::vector<StepRecord> ingest(std::size_t cls, std::span<const double> x);

  // Frozen problem F_t for `cls`.
  DiscriminativeProblem problem(std::size_t cls) const;
  double objective(std::size_t cls) const;

  OnlineDiagnostics diagnostics(std::size_t cls) const;

  Index nodes() const { return n_; }
  std::size_t num_classes() const { return classes_.size(); }
  std::uint64_t time() const { return t_; }
  std::uint64_t class_count(std::size_t cls) const { return at(cls).count; }
  const EdgeVector& edges(std::size_t cls) const { return at(cls).w; }
  const DistanceVector& running_distance(std::size_t cls) const { return at(cls).z_bar; }
  const LearnConfig& config() const { return config_; }
  const MemoryMode& mode() const { return mode_; }
  std::size_t inner_iters() const { return inner_iters_; }

  void set_edges(std::size_t cls, EdgeVector w);
  // Uses config.step (or 2/eta) instead of the adaptive rule.
  void set_fixed_step(bool fixed) { fixed_step_ = fixed; }

  // Count of doubles held in the state; constant over the stream.
  std::size_t state_size() const;

 private:
  struct ClassState {
    DistanceVector z_bar;
    EdgeVector w;
    std::uint64_t count = 0;
    // Sliding window ring buffer and its running sum.
    std::vector<Vector> window;
    std::size_t head = 0;
    Vector window_sum;
    bool clamped = false;
  };

  const ClassState& at(std::size_t cls) const;
  ClassState& at(std::size_t cls);
  double step_at(const Vector& w) const;
  Vector threshold_base(std::size_t cls) const;

  Index n_;
  LearnConfig config_;
  MemoryMode mode_;
  std::size_t inner_iters_;
  bool fixed_step_ = false;
  std::uint64_t t_ = 0;
  std::vector<ClassState> classes_;
};

// max{|1 - 4 mu beta|, |1 - mu eta|}
double contraction_factor(double step, double beta, double eta);

struct BoundPoint {
  double bound = 0.0;       // L~_{t-1} (e_1 + sum_{tau<t} v_tau / L~_tau)
  double simplified = 0.0;  // (L^_{t-1})^t e_1 + v^ / (1 - L^_{t-1})
  bool degenerate = false;  // some L_tau >= 1 so far
};

// Per-time tracking bounds for t = 1..T given L_t, i_t and v_t for t = 1..T-1
// and the initial distance ||w_1 - w_1*||. Entry t-1 of the result is the
// bound at time t.
std::vector<BoundPoint> tracking_bound(std::span<const double> contraction,
                                       std::span<const std::size_t> inner_iters,
                                       std::span<const double> variation,
                                       double initial_distance);

// Constant-memory recursive form of tracking_bound.
class TrackingBound {
 public:
  explicit TrackingBound(double initial_distance);

  // Moves from time t to t+1 given L_t^{i_t} (already raised) and v_t.
  void advance(double contraction_power, double variation, double max_factor);

  double bound() const { return bound_; }
  double simplified() const;
  bool degenerate() const { return max_factor_ >= 1.0; }
  std::uint64_t time() const { return t_; }

 private:
  double initial_;
  double bound_;
  double max_factor_ = 0.0;
  double effective_max_ = 0.0;
  double max_variation_ = 0.0;
  std::uint64_t t_ = 1;
};

struct TrackingSample {
  std::uint64_t t = 0;
  double distance = 0.0;   // ||w_t - w_t*||
  double bound = 0.0;
  double simplified_bound = 0.0;
  double objective = 0.0;  // F_t(w_t)
  double optimum = 0.0;    // F_t(w_t*)
  double contraction = 0.0;  // product of L factors applied at this slot
  bool degenerate = false;
  bool clamped = false;
};

// Single-class tracker that solves the batch problem after every slot to
// measure ||w_t - w_t*|| and accumulate the tracking bound.
class Tracker {
 public:
  Tracker(OnlineLearner learner, LearnConfig oracle_config);

  TrackingSample ingest(std::span<const double> x);

  const OnlineLearner& learner() const { return learner_; }
  const EdgeVector& optimum() const { return optimum_; }
  std::size_t violations() const { return violations_; }

 private:
  OnlineLearner learner_;
  LearnConfig oracle_config_;
  EdgeVector optimum_;
  bool started_ = false;
  TrackingBound bound_{0.0};
  double pending_contraction_ = 1.0;
  double pending_max_factor_ = 0.0;
  std::size_t violations_ = 0;
};

}  // namespace sgl
