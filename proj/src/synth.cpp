#include "sgl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "sgl/error.hpp"

namespace sgl {

namespace {

constexpr std::size_t kMaxRetries = 100;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

EdgeVector erdos_renyi(Index n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector w(pair_count(n));
  for (Index k = 0; k < w.size(); ++k) w[k] = unit(rng) < p ? 1.0 : 0.0;
  return EdgeVector(n, std::move(w));
}

EdgeVector barabasi_albert(Index n, Index m, std::mt19937_64& rng) {
  EdgeVector g(n);
  std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      g.set_weight(i, j, 1.0);
      degree[i] += 1.0;
      degree[j] += 1.0;
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Index> targets;
  for (Index u = m; u < n; ++u) {
    targets.clear();
    std::vector<double> weight(degree.begin(), degree.begin() + u);
    for (Index pick = 0; pick < m; ++pick) {
      double total = std::accumulate(weight.begin(), weight.end(), 0.0);
      const bool uniform = total <= 0.0;
      if (uniform) total = static_cast<double>(u - pick);
      double r = unit(rng) * total;
      Index chosen = -1;
      for (Index v = 0; v < u; ++v) {
        if (std::find(targets.begin(), targets.end(), v) != targets.end()) continue;
        const double mass = uniform ? 1.0 : weight[v];
        chosen = v;
        if (r < mass) break;
        r -= mass;
      }
      targets.push_back(chosen);
      weight[chosen] = 0.0;
    }
    for (Index v : targets) {
      g.set_weight(v, u, 1.0);
      degree[v] += 1.0;
      degree[u] += 1.0;
    }
  }
  return g;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

bool is_connected(const EdgeVector& w, double threshold) {
  const Index n = w.nodes();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  Index components = n;
  for (const auto& [i, j] : w.edges(threshold)) {
    const Index a = find(i);
    const Index b = find(j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

GeneratedGraph gen_graph(const GraphSpec& spec) {
  if (spec.n < 2) fail(ErrorCode::kInvalidArgument, "graphs need at least two nodes");
  if (const auto* er = std::get_if<ErdosRenyi>(&spec.kind)) {
    if (!(er->p > 0.0 && er->p <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "ER edge probability must lie in (0,1]");
    }
  } else {
    const Index m = std::get<BarabasiAlbert>(spec.kind).m;
    if (m < 1 || m >= spec.n) fail(ErrorCode::kInvalidArgument, "BA needs 1 <= m < n");
  }
  for (std::size_t salt = 0; salt <= kMaxRetries; ++salt) {
    std::mt19937_64 rng(derive_seed(spec.seed, salt));
    EdgeVector g = std::holds_alternative<ErdosRenyi>(spec.kind)
                       ? erdos_renyi(spec.n, std::get<ErdosRenyi>(spec.kind).p, rng)
                       : barabasi_albert(spec.n, std::get<BarabasiAlbert>(spec.kind).m, rng);
    if (is_connected(g)) return {std::move(g), salt};
  }
  fail(ErrorCode::kUndefined, "no connected graph after 100 retries");
}

RewireResult rewire(const EdgeVector& w, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "rewire fraction must lie in [0,1]");
  }
  std::vector<Index> present;
  std::vector<Index> absent;
  for (Index k = 0; k < w.size(); ++k) (w[k] > 0.0 ? present : absent).push_back(k);
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(present.size())));
  if (count == 0) return {w, {}};
  if (absent.empty()) return {w, "graph is complete; no absent pairs to rewire into"};
  if (absent.size() < count) {
    fail(ErrorCode::kInvalidArgument, "graph too dense to insert replacement edges");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(present.begin(), present.end(), rng);
  std::shuffle(absent.begin(), absent.end(), rng);
  Vector out = w.weights();
  for (std::size_t r = 0; r < count; ++r) {
    out[absent[r]] = out[present[r]];
    out[present[r]] = 0.0;
  }
  return {EdgeVector(w.nodes(), std::move(out)), {}};
}

Matrix laplacian_pseudoinverse(const Matrix& l) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(l);
  const Vector& lambda = solver.eigenvalues();
  Vector inv(lambda.size());
  for (Index k = 0; k < lambda.size(); ++k) inv[k] = lambda[k] > 1e-9 ? 1.0 / lambda[k] : 0.0;
  return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().transpose();
}

SignalResult gen_smooth_signals(const EdgeVector& w, Index p, double sigma, std::uint64_t seed) {
  if (p < 1) fail(ErrorCode::kInvalidArgument, "need at least one signal");
  if (!(sigma >= 0.0)) fail(ErrorCode::kInvalidArgument, "noise level must be >= 0");
  const Index n = w.nodes();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian(w));
  const Vector& lambda = solver.eigenvalues();
  Vector scale(n);
  Index zero_modes = 0;
  for (Index k = 0; k < n; ++k) {
    if (lambda[k] > 1e-9) {
      scale[k] = 1.0 / std::sqrt(lambda[k]);
    } else {
      scale[k] = 0.0;
      ++zero_modes;
    }
  }
  const Matrix mix = solver.eigenvectors() * scale.asDiagonal();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, p);
  Vector u(n);
  Vector v(n);
  for (Index col = 0; col < p; ++col) {
    for (Index i = 0; i < n; ++i) u[i] = normal(rng);
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
    x.col(col) = mix * u + sigma * v;
  }
  SignalResult out{SignalMatrix(std::move(x)), {}};
  if (zero_modes > 1 && sigma == 0.0) {
    out.warning = "disconnected graph with zero noise: covariance is rank deficient";
  }
  return out;
}

SyntheticStream::SyntheticStream(std::vector<EdgeVector> truths, std::vector<SignalMatrix> signals)
    : truths_(std::move(truths)), signals_(std::move(signals)) {
  if (truths_.empty() || truths_.size() != signals_.size()) {
    fail(ErrorCode::kInvalidArgument, "stream needs one signal block per segment");
  }
  for (const auto& block : signals_) {
    starts_.push_back(horizon_);
    horizon_ += static_cast<std::size_t>(block.signals());
  }
}

std::size_t SyntheticStream::segment_of(std::size_t t) const {
  if (t >= horizon_) fail(ErrorCode::kInvalidArgument, "time index beyond the stream horizon");
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  return static_cast<std::size_t>(it - starts_.begin()) - 1;
}

Vector SyntheticStream::signal(std::size_t t) const {
  const std::size_t s = segment_of(t);
  return signals_[s].signal(static_cast<Index>(t - starts_[s]));
}

SyntheticStream gen_stream(const StreamSpec& spec) {
  if (spec.segments.empty()) fail(ErrorCode::kInvalidArgument, "stream needs a segment");
  if (!std::holds_alternative<GraphSpec>(spec.segments.front().source)) {
    fail(ErrorCode::kInvalidArgument, "the first segment must specify a graph");
  }
  std::vector<EdgeVector> truths;
  std::vector<SignalMatrix> signals;
  for (std::size_t s = 0; s < spec.segments.size(); ++s) {
    const StreamSegment& seg = spec.segments[s];
    if (seg.duration < 1) fail(ErrorCode::kInvalidArgument, "segment durations must be >= 1");
    EdgeVector truth;
    if (const auto* g = std::get_if<GraphSpec>(&seg.source)) {
      truth = gen_graph(*g).edges;
    } else {
      const auto& r = std::get<RewireOf>(seg.source);
      bool accepted = false;
      for (std::size_t salt = 0; salt <= kMaxRetries && !accepted; ++salt) {
        const std::uint64_t seed = salt == 0 ? r.seed : derive_seed(r.seed, salt);
        truth = rewire(truths.back(), r.fraction, seed).edges;
        accepted = !r.require_connected || is_connected(truth);
      }
      if (!accepted) fail(ErrorCode::kUndefined, "no connected rewiring after 100 retries");
    }
    const std::uint64_t seed = s == 0 ? spec.seed : derive_seed(spec.seed, s);
    signals.push_back(
        gen_smooth_signals(truth, static_cast<Index>(seg.duration), spec.sigma, seed).signals);
    truths.push_back(std::move(truth));
  }
  return SyntheticStream(std::move(truths), std::move(signals));
}

}  // namespace sgl
