#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "sgl/batch.hpp"
#include "sgl/error.hpp"
#include "test_util.hpp"

using namespace sgl;

namespace {

LearnConfig make_config(double alpha, double beta, double gamma, double d_min) {
  LearnConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.gamma = gamma;
  c.d_min = d_min;
  return c;
}

DiscriminativeProblem random_problem(std::mt19937_64& rng, Index n, const LearnConfig& config,
                                     std::size_t others = 1) {
  std::vector<DistanceVector> rest;
  for (std::size_t k = 0; k < others; ++k) {
    rest.emplace_back(n, test::uniform_vector(rng, pair_count(n), 0.0, 1.0));
  }
  return DiscriminativeProblem(DistanceVector(n, test::uniform_vector(rng, pair_count(n), 0.0, 1.0)),
                               std::move(rest), config);
}

}  // namespace

TEST_CASE("lipschitz constant") {
  CHECK(lipschitz_constant(make_config(1, 1, 0, 1), 2) == doctest::Approx(6.0));
  CHECK(lipschitz_bound(0.0, 0.3, 9, 0.5) == doctest::Approx(1.2));
  const double a1 = lipschitz_bound(1.5, 0.2, 8, 0.4) - 0.8;
  const double a2 = lipschitz_bound(1.5, 0.2, 8, 0.8) - 0.8;
  CHECK(a2 == doctest::Approx(a1 / 4.0));
  CHECK(resolved_step(make_config(1, 1, 0, 1), 2) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(make_config(0, 1, 0, 1).validate(3), Error);
  CHECK_THROWS_AS(make_config(1, 0, 0, 1).validate(3), Error);
  CHECK_THROWS_AS(make_config(1, 1, -1, 1).validate(3), Error);
  CHECK_THROWS_AS(make_config(1, 1, 0, 0).validate(3), Error);
  LearnConfig c = make_config(1, 1, 0, 1);
  c.step = 2.0 / lipschitz_constant(c, 3);
  CHECK_NOTHROW(c.validate(3));
  c.step = 2.1 / lipschitz_constant(c, 3);
  CHECK_THROWS_AS(c.validate(3), Error);
  c.step = 0.0;
  CHECK_THROWS_AS(c.validate(3), Error);
}

TEST_CASE("objective") {
  const auto config = make_config(1, 1, 0, 1);
  DiscriminativeProblem p(DistanceVector(3), {}, config);
  CHECK(objective(EdgeVector(3, Vector::Ones(3)), p) == doctest::Approx(6.0 - 3.0 * std::log(2.0)));
  CHECK(objective(EdgeVector(3, Vector{{1.0, 0.0, 0.0}}), p) ==
        std::numeric_limits<double>::infinity());
  CHECK(objective(Vector{{1.0, -0.1, 1.0}}, p) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(objective(EdgeVector(4), p), Error);
}

TEST_CASE("objective agrees with the matrix form") {
  std::mt19937_64 rng(31);
  for (int r = 0; r < 30; ++r) {
    const Index n = 3 + r % 6;
    const auto config = make_config(0.5 + r % 3, 0.1 * (1 + r % 4), 0.3 * (r % 3), 0.5);
    const auto p = random_problem(rng, n, config, 2);
    const auto w = test::random_edges(rng, n);
    std::vector<Matrix> others;
    for (const auto& z : p.others()) others.push_back(test::distance_matrix(z.values(), n));
    const double m = test::objective_by_matrix(w, test::distance_matrix(p.own().values(), n), others,
                                               config.alpha, config.beta, config.gamma);
    const double v = objective(w, p);
    CHECK(std::abs(m - v) <= 1e-10 * std::max(1.0, std::abs(m)));
  }
}

TEST_CASE("smooth gradient") {
  SUBCASE("triangle stationary point") {
    const auto g = grad_smooth(EdgeVector(3, Vector::Ones(3)), make_config(1, 0.25, 0, 1));
    CHECK(g.norm() < 1e-15);
  }
  SUBCASE("central differences") {
    std::mt19937_64 rng(32);
    for (int r = 0; r < 20; ++r) {
      const Index n = 4 + r % 5;
      const Vector w = test::uniform_vector(rng, pair_count(n), 0.1, 1.0);
      const double alpha = 0.5 + r % 3, beta = 0.05 * (1 + r % 5);
      const Vector g = grad_smooth(w, n, alpha, beta, 1e-9).gradient;
      Vector fd(w.size());
      const double h = 1e-6;
      for (Index k = 0; k < w.size(); ++k) {
        Vector a = w, b = w;
        a[k] += h;
        b[k] -= h;
        fd[k] = (smooth_objective(a, n, alpha, beta) - smooth_objective(b, n, alpha, beta)) / (2 * h);
      }
      CHECK((fd - g).norm() <= 1e-6 * g.norm());
    }
  }
  SUBCASE("linear in alpha") {
    std::mt19937_64 rng(33);
    const Vector w = test::uniform_vector(rng, pair_count(6), 0.1, 1.0);
    const Vector g2 = grad_smooth(w, 6, 2.0, 0.3, 1e-9).gradient;
    const Vector g1 = grad_smooth(w, 6, 1.0, 0.3, 1e-9).gradient;
    const Vector barrier = grad_smooth(w, 6, 1.0, 0.0, 1e-9).gradient;
    CHECK((g2 - g1 - barrier).norm() < 1e-12);
  }
  SUBCASE("degenerate degree") {
    CHECK_THROWS_AS(grad_smooth(EdgeVector(3, Vector{{1.0, 0.0, 0.0}}), make_config(1, 1, 0, 1)),
                    Error);
    const auto clamped = grad_smooth(Vector{{1.0, 0.0, 0.0}}, 3, 1.0, 1.0, 1e-9);
    CHECK(clamped.clamped);
    CHECK(clamped.gradient.allFinite());
  }
}

TEST_CASE("prox") {
  CHECK(prox_nonsmooth(Vector{{1.0, 0.5}}, Vector{{0.3, 0.8}}).isApprox(Vector{{0.7, 0.0}}));
  CHECK(prox_nonsmooth(Vector{{0.1}}, Vector{{-0.2}})[0] == doctest::Approx(0.3));
  CHECK(prox_nonsmooth(Vector{{-1.0, 2.0, 0.0}}, Vector::Zero(3)) == Vector{{0.0, 2.0, 0.0}});
  CHECK_THROWS_AS(prox_nonsmooth(Vector::Zero(2), Vector::Zero(3)), Error);
}

TEST_CASE("degree operator spectrum") {
  for (Index n : {3, 5, 10}) {
    const Matrix s = degree_operator(n);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s * s.transpose());
    const Vector ev = es.eigenvalues();
    CHECK(std::abs(ev[n - 1] - 2.0 * (n - 1)) < 1e-8);
    for (Index k = 0; k + 1 < n; ++k) CHECK(std::abs(ev[k] - (n - 2)) < 1e-8);
  }
}

TEST_CASE("strong convexity and lipschitz inequalities") {
  std::mt19937_64 rng(34);
  for (int r = 0; r < 200; ++r) {
    const Index n = 3 + r % 7;
    const auto config = make_config(0.5 + r % 4, 0.05 + 0.1 * (r % 3), 0, 0.1 * (n - 1));
    const Vector w1 = test::uniform_vector(rng, pair_count(n), 0.1, 1.0);
    const Vector w2 = test::uniform_vector(rng, pair_count(n), 0.1, 1.0);
    const double eta = lipschitz_constant(config, n);
    const Vector g1 = grad_smooth(w1, n, config.alpha, config.beta, 1e-9).gradient;
    const Vector g2 = grad_smooth(w2, n, config.alpha, config.beta, 1e-9).gradient;
    const Vector dw = w1 - w2;
    CHECK((g1 - g2).dot(dw) >= 4 * config.beta * dw.squaredNorm() - 1e-9);
    CHECK((g1 - g2).norm() <= eta * dw.norm() + 1e-9);
  }
}

TEST_CASE("default initialization") {
  const auto w = default_initialization(5, make_config(1, 1, 0, 0.4));
  CHECK((degrees(w).array() - 1.0).abs().maxCoeff() < 1e-12);
  const auto v = default_initialization(5, make_config(1, 1, 0, 3.0));
  CHECK((degrees(v).array() - 3.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("learn_batch on symmetric data yields uniform weights") {
  const auto config = make_config(1, 0.2, 0, 0.5);
  DiscriminativeProblem p(DistanceVector(6, Vector::Constant(15, 0.7)), {}, config);
  const auto r = learn_batch(p);
  CHECK(r.diagnostics.converged);
  const Vector& w = r.weights.weights();
  CHECK(w.maxCoeff() - w.minCoeff() < 1e-9);
  CHECK(w.minCoeff() > 0.0);
}

TEST_CASE("learn_batch favors the close pair") {
  // The far node settles near degree 0.05, so the floor must sit below it.
  auto config = make_config(1, 0.1, 0, 0.04);
  config.max_iter = 200000;
  DiscriminativeProblem p(DistanceVector(3, Vector{{0.0, 10.0, 10.0}}), {}, config);
  const auto r = learn_batch(p);
  const Vector& w = r.weights.weights();
  Index best = 0;
  w.maxCoeff(&best);
  CHECK(best == pair_index(0, 1, 3));
  // Tiny-step projected gradient oracle.
  const Vector oracle = test::projected_gradient_oracle(3, p.linear_term(), 1, 0.1,
                                                        0.1 / lipschitz_constant(config, 3),
                                                        1000000, Vector::Ones(3));
  CHECK(objective(r.weights, p) <= objective(oracle, p) + 1e-6);
}

TEST_CASE("learn_batch matches a tiny-step oracle") {
  std::mt19937_64 rng(35);
  for (int r = 0; r < 4; ++r) {
    const auto config = make_config(1.0, 0.5, 0.2 * r, 0.5);
    const auto p = random_problem(rng, 5, config, 1);
    const auto res = learn_batch(p);
    CHECK(res.diagnostics.converged);
    const double eta = lipschitz_constant(config, 5);
    const Vector oracle = test::projected_gradient_oracle(5, p.linear_term(), config.alpha,
                                                          config.beta, 0.1 / eta, 200000,
                                                          Vector::Constant(10, 0.5));
    CHECK(std::abs(objective(res.weights, p) - objective(oracle, p)) <= 1e-6);
    const auto kkt = stationarity(res.weights, p);
    CHECK(kkt.max_active_residual <= 1e-5 * eta);
    CHECK(kkt.min_inactive_residual >= -1e-5 * eta);
  }
}

TEST_CASE("monotone descent at step 1/eta") {
  std::mt19937_64 rng(36);
  auto config = make_config(1.0, 0.3, 0.5, 0.2);
  config.step = 1.0 / lipschitz_constant(config, 7);
  config.max_iter = 3000;
  const auto p = random_problem(rng, 7, config, 2);
  double previous = objective(default_initialization(7, config), p);
  bool monotone = true;
  learn_batch(p, std::nullopt, [&](std::size_t, const Vector&, double f) {
    if (f > previous + 1e-12) monotone = false;
    previous = f;
  });
  CHECK(monotone);
}

TEST_CASE("accelerated solver reaches the same optimum") {
  std::mt19937_64 rng(37);
  auto config = make_config(1.0, 0.2, 0.4, 0.5);
  const auto p = random_problem(rng, 8, config, 1);
  const auto plain = learn_batch(p);
  config.accelerated = true;
  config.tol = 1e-10;
  DiscriminativeProblem q(p.own(), p.others(), config);
  const auto fast = learn_batch(q);
  CHECK(fast.diagnostics.converged);
  CHECK(std::abs(fast.diagnostics.final_objective - plain.diagnostics.final_objective) < 1e-7);
}

TEST_CASE("non-convergence returns the best iterate") {
  std::mt19937_64 rng(38);
  auto config = make_config(1.0, 0.2, 0.0, 0.5);
  config.max_iter = 3;
  const auto p = random_problem(rng, 6, config, 0);
  const auto r = learn_batch(p);
  CHECK_FALSE(r.diagnostics.converged);
  CHECK(r.diagnostics.iterations == 3);
  CHECK(r.diagnostics.final_objective == doctest::Approx(objective(r.weights, p)));
}

TEST_CASE("gamma zero ignores the other classes") {
  std::mt19937_64 rng(39);
  const auto config = make_config(1.0, 0.2, 0.0, 0.5);
  const auto with = random_problem(rng, 6, config, 3);
  const DiscriminativeProblem without(with.own(), {}, config);
  CHECK(learn_batch(with).weights == learn_batch(without).weights);
}

TEST_CASE("joint scaling of distances and weights leaves the minimizer") {
  std::mt19937_64 rng(40);
  for (double s : {0.5, 3.0}) {
    const auto config = make_config(1.0, 0.25, 0.3, 0.5);
    const auto p = random_problem(rng, 6, config, 1);
    auto scaled_config = config;
    scaled_config.alpha *= s;
    scaled_config.beta *= s;
    std::vector<DistanceVector> others{DistanceVector(6, s * p.others()[0].values())};
    const DiscriminativeProblem q(DistanceVector(6, s * p.own().values()), others, scaled_config);
    const auto a = learn_batch(p).weights.weights();
    const auto b = learn_batch(q).weights.weights();
    CHECK((a - b).norm() <= 1e-6 * a.norm());
  }
}

TEST_CASE("problem from datasets") {
  std::mt19937_64 rng(41);
  const SignalMatrix a(test::normal_matrix(rng, 4, 6)), b(test::normal_matrix(rng, 4, 3));
  auto config = make_config(1, 1, 0.5, 1);
  const auto p = DiscriminativeProblem::from_datasets({a, b}, 0, config);
  CHECK((p.own().values() - distance_vector(a).values()).norm() < 1e-12);
  CHECK((p.linear_term() - 2.0 * (distance_vector(a).values() - 0.5 * distance_vector(b).values()))
            .norm() < 1e-12);
  config.normalize_distances = true;
  const auto q = DiscriminativeProblem::from_datasets({a, b}, 1, config);
  CHECK((q.own().values() - distance_vector(b).values() / 3.0).norm() < 1e-12);
  CHECK_THROWS_AS(DiscriminativeProblem::from_datasets({a, SignalMatrix(Matrix(5, 2))}, 0, config),
                  Error);
}
