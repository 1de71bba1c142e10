#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sgl/classifier.hpp"
#include "sgl/online.hpp"
#include "sgl/synth.hpp"

namespace sgl {

using GraphFamily = std::variant<ErdosRenyi, BarabasiAlbert>;

// "er" / "ba" style short name of a family.
std::string family_label(const GraphFamily& family);

// Settings that converge on the desk-scale ER/BA problems.
LearnConfig default_classification_config();
LearnConfig default_tracking_config();
LearnConfig default_oracle_config();

// Supervised protocol: one random graph per class, smooth signals on each,
// a per-class train/test split, fit, classify the held-out signals.
struct ClassificationSpec {
  std::vector<GraphFamily> classes = {ErdosRenyi{0.1}, BarabasiAlbert{3}};
  Index n = 60;
  std::size_t signals = 100;  // total over all classes
  double sigma = 0.5;
  std::uint64_t seed = 7;
  std::size_t trials = 10;
  double train_fraction = 0.8;
  LearnConfig config = default_classification_config();
  std::size_t bandwidth = 0;
  bool normalize_frobenius = false;
  bool parallel = true;  // run trials concurrently

  void validate() const;
};

struct Prediction {
  std::size_t truth = 0;
  std::size_t label = 0;
  std::vector<double> energies;
  bool tie = false;
};

struct ClassificationTrial {
  std::size_t trial = 0;
  double accuracy = 0.0;
  std::vector<double> f_measure;  // per class, learned vs generating graph
  // Share of test signals whose cumulative relative energy at the model
  // bandwidth is highest on their own class basis.
  double discriminability = 0.0;
  std::vector<EdgeVector> truths;
  ClassifierModel model;
  std::vector<Prediction> predictions;
  // curves[c][k]: mean cumulative relative energy of class-c test signals on
  // the class-k basis.
  std::vector<std::vector<Vector>> curves;
};

struct ClassificationSummary {
  double accuracy = 0.0;
  std::vector<double> f_measure;
  double discriminability = 0.0;
};

ClassificationTrial run_classification_trial(const ClassificationSpec& spec, std::size_t trial);
std::vector<ClassificationTrial> run_classification(const ClassificationSpec& spec);
ClassificationSummary summarize(const std::vector<ClassificationTrial>& trials);

// Piecewise-constant ER stream: one graph, then a rewired copy.
struct TrackingSpec {
  Index n = 30;
  double p = 0.1;
  std::size_t switch_at = 2000;
  std::size_t horizon = 0;  // 0 selects 2 * switch_at
  double rewire = 0.4;
  double sigma = 0.05;
  double theta = 0.003;
  std::uint64_t seed = 11;
  std::size_t checkpoint = 500;
  std::size_t warmup_signals = 5;  // pre-stream signals seeding the statistic
  std::size_t settle = 500;        // samples after a switch before gaps count
  std::size_t inner_iters = 1;
  LearnConfig config = default_tracking_config();
  LearnConfig oracle = default_oracle_config();  // alpha, beta, gamma come from config

  void validate() const;
  std::size_t resolved_horizon() const { return horizon == 0 ? 2 * switch_at : horizon; }
  StreamSpec stream_spec() const;
};

struct TrackingCheckpoint {
  std::size_t t = 0;  // 1-based slot
  std::size_t segment = 0;
  bool settled = false;  // at least `settle` samples into its segment
  bool segment_end = false;
  double objective_gap = 0.0;  // (F_t(w_t) - F_t*) / |F_t*|
  double f_online = 0.0;
  double f_batch = 0.0;
  TrackingSample sample;
  EdgeVector online;
  EdgeVector batch;
};

struct TrackingRun {
  std::vector<TrackingSample> samples;  // every slot
  std::vector<TrackingCheckpoint> checkpoints;
  std::vector<EdgeVector> truths;
  std::size_t violations = 0;  // slots with distance > bound + 1e-9
};

TrackingRun run_tracking(const TrackingSpec& spec);

}  // namespace sgl
