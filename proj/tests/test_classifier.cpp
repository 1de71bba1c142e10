#include <doctest.h>

#include <cmath>
#include <random>

#include "sgl/classifier.hpp"
#include "sgl/error.hpp"
#include "sgl/synth.hpp"
#include "test_util.hpp"

using namespace sgl;

namespace {

ClassGraph class_graph(const EdgeVector& w, std::string label) {
  ClassGraph g;
  g.label = std::move(label);
  g.edges = w;
  g.basis = gft_decompose(laplacian(w));
  return g;
}

ClassifierModel two_family_model(std::size_t bandwidth, double scale_b = 1.0) {
  const auto er = gen_graph({ErdosRenyi{0.2}, 20, 101}).edges;
  const auto ba = gen_graph({BarabasiAlbert{2}, 20, 102}).edges;
  return ClassifierModel({class_graph(er, "er"),
                          class_graph(EdgeVector(20, scale_b * ba.weights()), "ba")},
                         bandwidth, false);
}

LearnConfig fit_config() {
  LearnConfig c;
  c.alpha = 0.5;
  c.beta = 0.1;
  c.d_min = 0.3;
  c.max_iter = 20000;
  c.normalize_distances = true;
  return c;
}

}  // namespace

TEST_CASE("default bandwidth") {
  CHECK(default_bandwidth(60) == 20);
  CHECK(default_bandwidth(10) == 3);
  CHECK(default_bandwidth(2) == 1);
}

TEST_CASE("model validation") {
  const auto g = class_graph(EdgeVector(4, Vector::Ones(6)), "a");
  CHECK_THROWS_AS(ClassifierModel({g}, 2, false), Error);
  CHECK_THROWS_AS(ClassifierModel({g, g}, 0, false), Error);
  CHECK_THROWS_AS(ClassifierModel({g, g}, 5, false), Error);
  const auto h = class_graph(EdgeVector(5, Vector::Ones(10)), "b");
  CHECK_THROWS_AS(ClassifierModel({g, h}, 2, false), Error);
}

TEST_CASE("low-pass energy") {
  std::mt19937_64 rng(60);
  const auto model = two_family_model(20);
  const GftBasis& basis = model.graph(0).basis;
  for (int r = 0; r < 10; ++r) {
    const Vector x = test::uniform_vector(rng, 20, -1, 1);
    CHECK(lowpass_energy(model, 0, x) == doctest::Approx(x.squaredNorm()).epsilon(1e-12));
    for (std::size_t w = 1; w <= 20; ++w) {
      const double low = lowpass_energy(basis, w, x);
      const double high = (basis.eigenvectors.rightCols(20 - Index(w)).transpose() * x).squaredNorm();
      CHECK(std::abs(low + high - x.squaredNorm()) <= 1e-9);
    }
  }
  // Orthogonal to the first five eigenvectors.
  const Vector x = basis.eigenvectors.col(7) - 2.0 * basis.eigenvectors.col(12);
  CHECK(lowpass_energy(basis, 5, x) < 1e-20);
  // Own second eigenvector carries all of its energy in the first two bands.
  CHECK(lowpass_energy(basis, 2, basis.eigenvectors.col(1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(lowpass_energy(basis, 2, Vector::Ones(3)), Error);
}

TEST_CASE("cumulative relative energy") {
  std::mt19937_64 rng(61);
  const auto model = two_family_model(6);
  const Vector x = test::uniform_vector(rng, 20, -1, 1);
  const Vector c = cumulative_relative_energy(model.graph(1).basis, x);
  for (Index k = 1; k < c.size(); ++k) CHECK(c[k] >= c[k - 1] - 1e-15);
  CHECK(c[19] == doctest::Approx(1.0));
  CHECK(cumulative_relative_energy(model.graph(1).basis, Vector::Zero(20)).isZero(0.0));
}

TEST_CASE("classify picks the class whose graph makes the signal smooth") {
  const auto model = two_family_model(6);
  const Vector x = model.graph(0).basis.eigenvectors.col(1);
  // Energies from a separate eigensolve of each Laplacian.
  std::vector<double> expected;
  for (std::size_t c = 0; c < 2; ++c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(test::laplacian_by_hand(model.graph(c).edges));
    expected.push_back((es.eigenvectors().leftCols(6).transpose() * x).squaredNorm());
  }
  REQUIRE(expected[0] > expected[1]);
  const auto r = classify(model, x);
  CHECK(r.label == 0);
  CHECK_FALSE(r.tie);
  CHECK(r.energies[0] == doctest::Approx(expected[0]));
  CHECK(r.energies[1] == doctest::Approx(expected[1]));
}

TEST_CASE("classify is invariant to positive scaling") {
  std::mt19937_64 rng(62);
  const auto model = two_family_model(6);
  const auto scaled = two_family_model(6, 7.5);
  for (int r = 0; r < 50; ++r) {
    const Vector x = test::uniform_vector(rng, 20, -1, 1);
    const auto a = classify(model, x);
    const auto b = classify(model, 3.0 * x);
    CHECK(a.label == b.label);
    CHECK(b.energies[0] == doctest::Approx(9.0 * a.energies[0]));
    CHECK(classify(scaled, x).label == a.label);
  }
}

TEST_CASE("ties go to the lowest class index") {
  const auto g = class_graph(gen_graph({ErdosRenyi{0.4}, 8, 5}).edges, "a");
  const ClassifierModel model({g, g, g}, 3, false);
  const auto r = classify(model, Vector::LinSpaced(8, -1, 1));
  CHECK(r.label == 0);
  CHECK(r.tie);
}

TEST_CASE("fit") {
  const auto er = gen_graph({ErdosRenyi{0.3}, 12, 71}).edges;
  const auto ba = gen_graph({BarabasiAlbert{2}, 12, 72}).edges;
  const auto xa = gen_smooth_signals(er, 60, 0.1, 73).signals;
  const auto xb = gen_smooth_signals(ba, 60, 0.1, 74).signals;

  SUBCASE("labels and bandwidth") {
    FitOptions options;
    options.labels = {"er", "ba"};
    const auto model = fit({xa, xb}, fit_config(), options);
    CHECK(model.num_classes() == 2);
    CHECK(model.nodes() == 12);
    CHECK(model.bandwidth() == 4);
    CHECK(model.graph(1).label == "ba");
    for (const auto& g : model.graphs()) {
      for (Index k = 0; k < g.edges.size(); ++k) {
        CHECK((g.edges[k] == 0.0 || g.edges[k] >= fit_config().edge_threshold));
      }
    }
  }
  SUBCASE("identical datasets without discrimination") {
    const auto model = fit({xa, xa}, fit_config());
    CHECK((model.graph(0).edges.weights() - model.graph(1).edges.weights()).norm() < 1e-9);
  }
  SUBCASE("frobenius normalization keeps eigenvectors") {
    auto config = fit_config();
    config.gamma = 0.5;
    FitOptions options;
    const auto plain = fit({xa, xb}, config, options);
    options.normalize_frobenius = true;
    const auto normed = fit({xa, xb}, config, options);
    CHECK(normed.normalized());
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(std::sqrt(2.0) * normed.graph(c).edges.weights().norm() == doctest::Approx(1.0));
      const Matrix& a = plain.graph(c).basis.eigenvectors;
      const Matrix& b = normed.graph(c).basis.eigenvectors;
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  SUBCASE("parallel training matches serial") {
    FitOptions options;
    options.parallel = true;
    const auto a = fit({xa, xb}, fit_config(), options);
    const auto b = fit({xa, xb}, fit_config());
    CHECK(a.graph(0).edges == b.graph(0).edges);
    CHECK(a.graph(1).edges == b.graph(1).edges);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fit({xa}, fit_config()), Error);
    CHECK_THROWS_AS(fit({xa, SignalMatrix(Matrix(12, 0))}, fit_config()), Error);
    CHECK_THROWS_AS(fit({xa, SignalMatrix(Matrix::Ones(5, 3))}, fit_config()), Error);
    FitOptions options;
    options.labels = {"only"};
    CHECK_THROWS_AS(fit({xa, xb}, fit_config(), options), Error);
  }
}
