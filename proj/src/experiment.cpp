#include "sgl/experiment.hpp"

#include <cmath>
#include <future>

#include "sgl/error.hpp"
#include "sgl/evalkit.hpp"

namespace sgl {

namespace {

constexpr std::uint64_t kWarmupSalt = 0x77;
constexpr std::uint64_t kRewireSalt = 0x52;

std::size_t class_share(std::size_t total, std::size_t classes, std::size_t c) {
  return total / classes + (c < total % classes ? 1 : 0);
}

}  // namespace

LearnConfig default_classification_config() {
  LearnConfig c;
  c.alpha = 0.5;
  c.beta = 0.1;
  c.gamma = 1.2;
  c.d_min = 0.3;
  c.max_iter = 20000;
  c.normalize_distances = true;
  return c;
}

LearnConfig default_tracking_config() {
  LearnConfig c;
  c.alpha = 0.5;
  c.beta = 0.15;
  c.d_min = 0.3;
  return c;
}

LearnConfig default_oracle_config() {
  LearnConfig c = default_tracking_config();
  c.accelerated = true;
  c.tol = 1e-10;
  c.max_iter = 100000;
  return c;
}

std::string family_label(const GraphFamily& family) {
  return std::holds_alternative<ErdosRenyi>(family) ? "er" : "ba";
}

void ClassificationSpec::validate() const {
  if (classes.size() < 2) fail(ErrorCode::kInvalidArgument, "need at least two classes");
  if (n < 3) fail(ErrorCode::kInvalidArgument, "need at least three nodes");
  if (trials == 0) fail(ErrorCode::kInvalidArgument, "trials must be positive");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "train fraction must lie in (0, 1)");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    fail(ErrorCode::kInvalidArgument, "sigma must be finite and nonnegative");
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto per_class = class_share(signals, classes.size(), c);
    const auto train = static_cast<std::size_t>(std::floor(train_fraction * per_class));
    if (train == 0 || train >= per_class) {
      fail(ErrorCode::kInvalidArgument, "split leaves a class without train or test signals");
    }
  }
  config.validate(n);
}

ClassificationTrial run_classification_trial(const ClassificationSpec& spec, std::size_t trial) {
  const std::size_t num_classes = spec.classes.size();
  std::vector<EdgeVector> truths;
  std::vector<SignalMatrix> train, test;
  for (std::size_t c = 0; c < num_classes; ++c) {
    GraphSpec g{spec.classes[c], spec.n, derive_seed(spec.seed, trial, 2 * c)};
    truths.push_back(gen_graph(g).edges);
    const auto per_class = class_share(spec.signals, num_classes, c);
    const auto x = gen_smooth_signals(truths.back(), static_cast<Index>(per_class), spec.sigma,
                                      derive_seed(spec.seed, trial, 2 * c + 1))
                       .signals;
    const auto k = static_cast<Index>(std::floor(spec.train_fraction * per_class));
    train.emplace_back(x.data().leftCols(k));
    test.emplace_back(x.data().rightCols(x.signals() - k));
  }

  FitOptions options;
  options.bandwidth = spec.bandwidth;
  options.normalize_frobenius = spec.normalize_frobenius;
  for (const auto& f : spec.classes) options.labels.push_back(family_label(f));
  ClassifierModel model = fit(train, spec.config, options);

  std::vector<Prediction> predictions;
  std::vector<std::vector<Vector>> curves(num_classes);
  std::size_t correct = 0, own_highest = 0;
  const auto band = model.bandwidth() - 1;
  for (std::size_t c = 0; c < num_classes; ++c) {
    curves[c].assign(num_classes, Vector::Zero(spec.n));
    for (Index p = 0; p < test[c].signals(); ++p) {
      const Vector x = test[c].signal(p);
      const auto r = classify(model, x);
      predictions.push_back({c, r.label, r.energies, r.tie});
      correct += r.label == c;
      std::vector<double> at_band(num_classes);
      for (std::size_t k = 0; k < num_classes; ++k) {
        const Vector curve = cumulative_relative_energy(model.graph(k).basis, x);
        curves[c][k] += curve;
        at_band[k] = curve[static_cast<Index>(band)];
      }
      bool highest = true;
      for (std::size_t k = 0; k < num_classes; ++k) {
        if (k != c && !(at_band[c] > at_band[k])) highest = false;
      }
      own_highest += highest;
    }
    for (auto& curve : curves[c]) curve /= static_cast<double>(test[c].signals());
  }

  std::vector<double> f;
  for (std::size_t c = 0; c < num_classes; ++c) {
    f.push_back(f_measure(model.graph(c).edges, truths[c], spec.config.edge_threshold));
  }
  const double total = static_cast<double>(predictions.size());
  return ClassificationTrial{trial,
                             correct / total,
                             std::move(f),
                             own_highest / total,
                             std::move(truths),
                             std::move(model),
                             std::move(predictions),
                             std::move(curves)};
}

std::vector<ClassificationTrial> run_classification(const ClassificationSpec& spec) {
  spec.validate();
  std::vector<ClassificationTrial> out;
  out.reserve(spec.trials);
  if (!spec.parallel) {
    for (std::size_t t = 0; t < spec.trials; ++t) out.push_back(run_classification_trial(spec, t));
    return out;
  }
  std::vector<std::future<ClassificationTrial>> pending;
  for (std::size_t t = 0; t < spec.trials; ++t) {
    pending.push_back(std::async(std::launch::async, run_classification_trial, std::cref(spec), t));
  }
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

ClassificationSummary summarize(const std::vector<ClassificationTrial>& trials) {
  ClassificationSummary s;
  if (trials.empty()) return s;
  s.f_measure.assign(trials.front().f_measure.size(), 0.0);
  for (const auto& t : trials) {
    s.accuracy += t.accuracy;
    s.discriminability += t.discriminability;
    for (std::size_t c = 0; c < s.f_measure.size(); ++c) s.f_measure[c] += t.f_measure[c];
  }
  const double k = static_cast<double>(trials.size());
  s.accuracy /= k;
  s.discriminability /= k;
  for (auto& f : s.f_measure) f /= k;
  return s;
}

void TrackingSpec::validate() const {
  if (n < 3) fail(ErrorCode::kInvalidArgument, "need at least three nodes");
  if (switch_at == 0) fail(ErrorCode::kInvalidArgument, "switch time must be positive");
  if (resolved_horizon() <= switch_at) {
    fail(ErrorCode::kInvalidArgument, "horizon must extend past the switch");
  }
  if (checkpoint == 0) fail(ErrorCode::kInvalidArgument, "checkpoint cadence must be positive");
  if (inner_iters == 0) fail(ErrorCode::kInvalidArgument, "inner iterations must be positive");
  config.validate(n);
}

StreamSpec TrackingSpec::stream_spec() const {
  StreamSpec s;
  s.sigma = sigma;
  s.seed = seed;
  s.segments.push_back({GraphSpec{ErdosRenyi{p}, n, seed}, switch_at});
  s.segments.push_back(
      {RewireOf{rewire, derive_seed(seed, kRewireSalt), true}, resolved_horizon() - switch_at});
  return s;
}

TrackingRun run_tracking(const TrackingSpec& spec) {
  spec.validate();
  const SyntheticStream stream = gen_stream(spec.stream_spec());

  OnlineLearner learner(spec.n, 1, spec.config, MemoryMode::ema(spec.theta), spec.inner_iters);
  if (spec.warmup_signals > 0) {
    learner.warm_start(0, gen_smooth_signals(stream.truth(0),
                                             static_cast<Index>(spec.warmup_signals), spec.sigma,
                                             derive_seed(spec.seed, kWarmupSalt))
                              .signals);
  }
  Tracker tracker(std::move(learner), spec.oracle);

  TrackingRun run;
  for (std::size_t s = 0; s < stream.num_segments(); ++s) run.truths.push_back(stream.truth(s));
  run.samples.reserve(stream.horizon());
  for (std::size_t t = 0; t < stream.horizon(); ++t) {
    const Vector x = stream.signal(t);
    const TrackingSample sample = tracker.ingest(std::span<const double>(x.data(), x.size()));
    run.samples.push_back(sample);

    const std::size_t slot = t + 1;
    const std::size_t segment = stream.segment_of(t);
    const bool last_in_segment =
        slot == stream.horizon() || stream.segment_of(slot) != segment;
    if (slot % spec.checkpoint != 0 && !last_in_segment) continue;

    TrackingCheckpoint cp;
    cp.t = slot;
    cp.segment = segment;
    cp.settled = slot - stream.segment_start(segment) >= spec.settle;
    cp.segment_end = last_in_segment;
    cp.objective_gap = (sample.objective - sample.optimum) / std::fabs(sample.optimum);
    cp.sample = sample;
    cp.online = tracker.learner().edges(0);
    cp.batch = tracker.optimum();
    const double thr = spec.config.edge_threshold;
    cp.f_online = f_measure(cp.online, stream.truth(segment), thr);
    cp.f_batch = f_measure(cp.batch, stream.truth(segment), thr);
    run.checkpoints.push_back(std::move(cp));
  }
  run.violations = tracker.violations();
  return run;
}

}  // namespace sgl
