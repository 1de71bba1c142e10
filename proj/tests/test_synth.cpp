#include <doctest.h>

#include <cmath>
#include <set>

#include "sgl/error.hpp"
#include "sgl/synth.hpp"
#include "test_util.hpp"

using namespace sgl;

namespace {

std::set<Index> support(const EdgeVector& w) {
  std::set<Index> s;
  for (Index k = 0; k < w.size(); ++k)
    if (w[k] > 0.0) s.insert(k);
  return s;
}

std::size_t missing_from(const std::set<Index>& a, const std::set<Index>& b) {
  std::size_t count = 0;
  for (Index k : a) count += b.count(k) == 0;
  return count;
}

}  // namespace

TEST_CASE("derive_seed") {
  CHECK(derive_seed(7, 1, 2) == derive_seed(7, 1, 2));
  CHECK(derive_seed(7, 1, 2) != derive_seed(7, 2, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}

TEST_CASE("erdos renyi") {
  const auto k4 = gen_graph({ErdosRenyi{1.0}, 4, 3});
  CHECK(k4.edges.weights() == Vector::Ones(6));
  CHECK(k4.retries == 0);

  const auto a = gen_graph({ErdosRenyi{0.2}, 25, 99});
  CHECK(a.edges == gen_graph({ErdosRenyi{0.2}, 25, 99}).edges);
  CHECK(is_connected(a.edges));
  for (Index k = 0; k < a.edges.size(); ++k) CHECK((a.edges[k] == 0.0 || a.edges[k] == 1.0));

  // Dense enough that connectivity retries almost never bias the count.
  const int runs = 200;
  const double pairs = pair_count(20), p = 0.5;
  double sum = 0.0;
  for (int s = 0; s < runs; ++s) sum += gen_graph({ErdosRenyi{p}, 20, std::uint64_t(s)}).edges.edge_count(0.5);
  const double se = std::sqrt(pairs * p * (1 - p) / runs);
  CHECK(std::abs(sum / runs - pairs * p) <= 3 * se);

  CHECK_THROWS_AS(gen_graph({ErdosRenyi{0.0}, 10, 1}), Error);
  CHECK_THROWS_AS(gen_graph({ErdosRenyi{0.5}, 1, 1}), Error);
}

TEST_CASE("barabasi albert") {
  const auto g = gen_graph({BarabasiAlbert{3}, 60, 5}).edges;
  const double density = double(g.edge_count(0.5)) / double(pair_count(60));
  CHECK(std::abs(density - 0.1) <= 0.03);
  CHECK(g.edge_count(0.5) == 3 + 3 * (60 - 3));
  CHECK(is_connected(g));
  CHECK(g == gen_graph({BarabasiAlbert{3}, 60, 5}).edges);
  CHECK_FALSE(g == gen_graph({BarabasiAlbert{3}, 60, 6}).edges);
  CHECK_THROWS_AS(gen_graph({BarabasiAlbert{0}, 10, 1}), Error);
  CHECK_THROWS_AS(gen_graph({BarabasiAlbert{10}, 10, 1}), Error);
}

TEST_CASE("connectivity") {
  EdgeVector w(4);
  w.set_weight(0, 1, 1.0);
  w.set_weight(2, 3, 1.0);
  CHECK_FALSE(is_connected(w));
  w.set_weight(1, 2, 0.5);
  CHECK(is_connected(w));
  CHECK_FALSE(is_connected(w, 0.6));
}

TEST_CASE("rewire") {
  const auto g = gen_graph({ErdosRenyi{0.1}, 30, 17}).edges;
  CHECK(rewire(g, 0.0, 1).edges == g);

  const auto k4 = EdgeVector(4, Vector::Ones(6));
  const auto full = rewire(k4, 1.0, 2);
  CHECK(full.edges == k4);
  CHECK_FALSE(full.warning.empty());

  const auto r = rewire(g, 0.4, 3).edges;
  const auto before = support(g), after = support(r);
  const auto expected = static_cast<std::size_t>(std::floor(0.4 * double(before.size())));
  CHECK(after.size() == before.size());
  CHECK(missing_from(before, after) == expected);
  CHECK(missing_from(after, before) == expected);
  CHECK(r == rewire(g, 0.4, 3).edges);

  EdgeVector dense(4, Vector::Ones(6));
  dense.set_weight(0, 1, 0.0);
  CHECK_THROWS_AS(rewire(dense, 1.0, 1), Error);
  CHECK_THROWS_AS(rewire(g, 1.5, 1), Error);
}

TEST_CASE("smooth signals") {
  SUBCASE("noiseless signals have zero mean across nodes") {
    const auto g = gen_graph({ErdosRenyi{0.3}, 15, 4}).edges;
    const auto x = gen_smooth_signals(g, 30, 0.0, 8).signals.data();
    CHECK(x.colwise().sum().cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("covariance on the triangle") {
    // pinv of the K3 Laplacian is L / 9.
    const auto k3 = EdgeVector(3, Vector::Ones(3));
    const double sigma = 0.3;
    const Matrix x = gen_smooth_signals(k3, 50000, sigma, 9).signals.data();
    const Matrix cov = x * x.transpose() / double(x.cols());
    const Matrix expected = laplacian(k3) / 9.0 + sigma * sigma * Matrix::Identity(3, 3);
    CHECK((cov - expected).norm() <= 0.05 * expected.norm());
    CHECK((laplacian_pseudoinverse(laplacian(k3)) - laplacian(k3) / 9.0).norm() < 1e-12);
  }
  SUBCASE("spectral variance") {
    const auto g = gen_graph({ErdosRenyi{0.5}, 6, 10}).edges;
    const auto basis = gft_decompose(laplacian(g));
    const Matrix x = gen_smooth_signals(g, 40000, 0.0, 11).signals.data();
    const Matrix c = basis.eigenvectors.transpose() * x;
    for (Index k = 1; k < 6; ++k) {
      const double var = c.row(k).squaredNorm() / double(x.cols());
      CHECK(std::abs(var * basis.eigenvalues[k] - 1.0) <= 0.1);
    }
  }
  SUBCASE("signals are smoother on their own graph") {
    int wins = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
      const auto own = gen_graph({ErdosRenyi{0.2}, 20, derive_seed(12, t, 0)}).edges;
      const auto other = gen_graph({ErdosRenyi{0.2}, 20, derive_seed(12, t, 1)}).edges;
      const auto x = gen_smooth_signals(own, 50, 0.1, derive_seed(12, t, 2)).signals;
      const Vector z = distance_vector(x).values();
      wins += own.weights().dot(z) / double(own.edge_count(0.5)) <
              other.weights().dot(z) / double(other.edge_count(0.5));
    }
    CHECK(wins >= 0.95 * trials);
  }
  SUBCASE("determinism and warnings") {
    const auto g = gen_graph({ErdosRenyi{0.3}, 10, 4}).edges;
    CHECK(gen_smooth_signals(g, 5, 0.2, 3).signals.data() ==
          gen_smooth_signals(g, 5, 0.2, 3).signals.data());
    EdgeVector split(4);
    split.set_weight(0, 1, 1.0);
    split.set_weight(2, 3, 1.0);
    CHECK_FALSE(gen_smooth_signals(split, 3, 0.0, 1).warning.empty());
    CHECK(gen_smooth_signals(split, 3, 0.1, 1).warning.empty());
    CHECK_THROWS_AS(gen_smooth_signals(g, 0, 0.1, 1), Error);
  }
}

TEST_CASE("streams") {
  const GraphSpec graph{ErdosRenyi{0.1}, 30, 21};
  SUBCASE("single segment") {
    StreamSpec spec;
    spec.sigma = 0.05;
    spec.seed = 6;
    spec.segments.push_back({graph, 40});
    const auto stream = gen_stream(spec);
    const Matrix direct = gen_smooth_signals(gen_graph(graph).edges, 40, 0.05, 6).signals.data();
    CHECK(stream.horizon() == 40);
    for (std::size_t t = 0; t < 40; ++t) CHECK(stream.signal(t) == direct.col(Index(t)));
  }
  SUBCASE("rewired second segment") {
    StreamSpec spec;
    spec.sigma = 0.05;
    spec.seed = 6;
    spec.segments.push_back({graph, 30});
    spec.segments.push_back({RewireOf{0.4, 77, true}, 20});
    const auto stream = gen_stream(spec);
    CHECK(stream.horizon() == 50);
    CHECK(stream.num_segments() == 2);
    CHECK(stream.segment_of(29) == 0);
    CHECK(stream.segment_of(30) == 1);
    CHECK(stream.segment_start(1) == 30);
    const auto a = support(stream.truth(0)), b = support(stream.truth(1));
    const auto expected = static_cast<std::size_t>(std::floor(0.4 * double(a.size())));
    CHECK(missing_from(a, b) == expected);
    CHECK(missing_from(b, a) == expected);
    CHECK(is_connected(stream.truth(1)));
    const auto again = gen_stream(spec);
    for (std::size_t t = 0; t < 50; ++t) CHECK(again.signal(t) == stream.signal(t));
    CHECK(again.truth(1) == stream.truth(1));
    CHECK_THROWS_AS(stream.segment_of(50), Error);
  }
  SUBCASE("invalid specs") {
    StreamSpec spec;
    CHECK_THROWS_AS(gen_stream(spec), Error);
    spec.segments.push_back({RewireOf{}, 10});
    CHECK_THROWS_AS(gen_stream(spec), Error);
    spec.segments.front() = {graph, 0};
    CHECK_THROWS_AS(gen_stream(spec), Error);
  }
}
