#include <doctest.h>

#include <cmath>
#include <random>

#include "sgl/error.hpp"
#include "sgl/evalkit.hpp"
#include "sgl/synth.hpp"
#include "test_util.hpp"

using namespace sgl;

namespace {

EdgeVector from_pairs(Index n, std::initializer_list<std::pair<Index, Index>> pairs, double w = 1.0) {
  EdgeVector e(n);
  for (auto [i, j] : pairs) e.set_weight(i, j, w);
  return e;
}

}  // namespace

TEST_CASE("f-measure") {
  const auto truth = from_pairs(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(f_measure(truth, truth) == 1.0);
  CHECK(f_measure(from_pairs(5, {{0, 4}, {1, 3}}), truth) == 0.0);
  CHECK(f_measure(from_pairs(5, {{0, 1}, {1, 2}}), truth) == doctest::Approx(2.0 / 3.0));
  CHECK(f_measure(EdgeVector(5), truth) == 0.0);
  CHECK_THROWS_AS(f_measure(truth, EdgeVector(5)), Error);
  CHECK_THROWS_AS(f_measure(truth, EdgeVector(4)), Error);

  // Weights below the threshold do not count.
  const auto weak = from_pairs(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, 5e-4);
  CHECK(f_measure(weak, truth) == 0.0);
  CHECK(f_measure(weak, truth, 1e-4) == 1.0);

  const auto s = edge_score(from_pairs(5, {{0, 1}, {0, 2}}), truth);
  CHECK(s.precision == doctest::Approx(0.5));
  CHECK(s.recall == doctest::Approx(0.25));
}

TEST_CASE("f-measure is symmetric") {
  std::mt19937_64 rng(80);
  for (int r = 0; r < 30; ++r) {
    const auto a = gen_graph({ErdosRenyi{0.3}, 10, rng()}).edges;
    const auto b = gen_graph({ErdosRenyi{0.3}, 10, rng()}).edges;
    CHECK(f_measure(a, b) == doctest::Approx(f_measure(b, a)).epsilon(1e-14));
  }
}

TEST_CASE("relative temporal deviation") {
  std::mt19937_64 rng(81);
  const auto w = test::random_edges(rng, 7);
  CHECK(relative_temporal_deviation(w, w) == 0.0);
  CHECK(relative_temporal_deviation(EdgeVector(7, 2.0 * w.weights()), w) == doctest::Approx(1.0));
  for (int r = 0; r < 10; ++r) {
    const auto a = test::random_edges(rng, 7, 0.0, 1.0), b = test::random_edges(rng, 7, 0.0, 1.0);
    const double matrix = (a.adjacency() - b.adjacency()).norm() / b.adjacency().norm();
    CHECK(std::abs(relative_temporal_deviation(a, b) - matrix) <= 1e-12);
  }
  CHECK_THROWS_AS(relative_temporal_deviation(w, EdgeVector(7)), Error);
}

TEST_CASE("algebraic connectivity") {
  CHECK(algebraic_connectivity(from_pairs(4, {{0, 1}, {2, 3}})) < 1e-9);
  CHECK(algebraic_connectivity(EdgeVector(3, Vector::Ones(3))) == doctest::Approx(3.0));
  CHECK(algebraic_connectivity(EdgeVector(2, Vector::Ones(1))) == doctest::Approx(2.0));

  std::mt19937_64 rng(82);
  std::uniform_int_distribution<Index> pick(0, pair_count(8) - 1);
  for (int r = 0; r < 30; ++r) {
    auto w = gen_graph({ErdosRenyi{0.3}, 8, rng()}).edges;
    const double before = algebraic_connectivity(w);
    const auto [i, j] = pair_nodes(pick(rng), 8);
    w.set_weight(i, j, w.weight(i, j) + 0.7);
    CHECK(algebraic_connectivity(w) >= before - 1e-12);
  }
}

TEST_CASE("series transforms") {
  Matrix constant = Matrix::Constant(3, 5, 42.0);
  CHECK(series_transform(constant, SeriesTransform::kRdtv).data().isZero(0.0));
  CHECK(series_transform(constant, SeriesTransform::kRdtv).signals() == 4);

  Matrix two(1, 2);
  two << 100.0, 110.0;
  CHECK(series_transform(two, SeriesTransform::kRdtv).data()(0, 0) == doctest::Approx(0.1));
  Matrix down(1, 2);
  down << 100.0, 90.0;
  CHECK(series_transform(down, SeriesTransform::kRdtv).data()(0, 0) == doctest::Approx(0.1));

  std::mt19937_64 rng(83);
  const Matrix prices = test::uniform_vector(rng, 12, 1.0, 500.0).reshaped(3, 4);
  const Matrix logs = series_transform(prices, SeriesTransform::kLog).data();
  CHECK(((logs.array().exp() - prices.array()) / prices.array()).abs().maxCoeff() <= 1e-12);

  Matrix bad = prices;
  bad(1, 2) = 0.0;
  CHECK_THROWS_AS(series_transform(bad, SeriesTransform::kLog), Error);
  CHECK_THROWS_AS(series_transform(Matrix::Ones(2, 1), SeriesTransform::kRdtv), Error);
}
