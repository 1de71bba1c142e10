#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sgl/error.hpp"
#include "sgl/io.hpp"
#include "test_util.hpp"

using namespace sgl;

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(90);
  for (double x : {0.0, 1.0, -2.5, 1e-300, 0.1, 1.0 / 3.0}) CHECK(std::stod(io::format_double(x)) == x);
  const Vector v = test::uniform_vector(rng, 50, -1e3, 1e3);
  for (Index k = 0; k < v.size(); ++k) CHECK(std::stod(io::format_double(v[k])) == v[k]);
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("signal csv") {
  std::mt19937_64 rng(91);
  const SignalMatrix x(test::normal_matrix(rng, 4, 7));
  std::stringstream ss;
  io::write_signal_csv(ss, x);
  CHECK(io::read_signal_csv(ss).data() == x.data());

  std::istringstream plain("1,2,3\n4,5,6\n");
  const auto y = io::read_signal_csv(plain);
  CHECK(y.nodes() == 3);
  CHECK(y.signals() == 2);
  CHECK(y.data()(2, 1) == 6.0);

  std::istringstream ragged("1,2,3\n4,5\n");
  CHECK_THROWS_AS(io::read_signal_csv(ragged), Error);
  std::istringstream junk("1,abc,3\n");
  CHECK_THROWS_AS(io::read_signal_csv(junk), Error);
}

TEST_CASE("edge csv") {
  std::mt19937_64 rng(92);
  auto w = test::random_edges(rng, 6);
  w.set_weight(0, 5, 0.0);
  const auto text = io::edge_csv_string(w);
  std::istringstream in(text);
  CHECK(io::read_edge_csv(in, 6) == w);
  std::istringstream again(text);
  CHECK(io::read_edge_csv(again).nodes() == 6);

  std::istringstream self_loop("i,j,weight\n2,2,1.0\n");
  CHECK_THROWS_AS(io::read_edge_csv(self_loop, 4), Error);
  std::istringstream negative("i,j,weight\n0,1,-1.0\n");
  CHECK_THROWS_AS(io::read_edge_csv(negative, 4), Error);
  std::istringstream outside("i,j,weight\n0,7,1.0\n");
  CHECK_THROWS_AS(io::read_edge_csv(outside, 4), Error);

  const auto pruned = io::edge_csv_string(w, 0.5);
  std::istringstream p(pruned);
  CHECK(io::read_edge_csv(p, 6) == w.pruned(0.5));
}

TEST_CASE("learn config json") {
  LearnConfig c;
  c.alpha = 0.7;
  c.gamma = 1.5;
  c.step = 0.01;
  c.accelerated = true;
  const auto back = io::learn_config_from_json(io::learn_config_to_json(c));
  CHECK(back.alpha == 0.7);
  CHECK(back.gamma == 1.5);
  REQUIRE(back.step.has_value());
  CHECK(*back.step == 0.01);
  CHECK(back.accelerated);

  const auto partial = io::learn_config_from_json(R"({"beta": 0.4})", c);
  CHECK(partial.beta == 0.4);
  CHECK(partial.alpha == 0.7);
  CHECK_THROWS_AS(io::learn_config_from_json(R"({"alpah": 1})"), Error);
  CHECK_THROWS_AS(io::learn_config_from_json(R"({"alpha": "x"})"), Error);
  CHECK_THROWS_AS(io::learn_config_from_json("{not json"), Error);

  const auto keys = nlohmann::json::parse(io::learn_config_to_json(LearnConfig{}));
  for (const char* k : {"alpha", "beta", "gamma", "d_min", "step", "tol", "max_iter", "accelerated",
                        "edge_threshold"}) {
    CHECK(keys.contains(k));
  }
}

TEST_CASE("diagnostics json") {
  BatchDiagnostics d;
  d.iterations = 12;
  d.converged = true;
  const auto j = nlohmann::json::parse(io::batch_diagnostics_json(d));
  CHECK(j["iterations"] == 12);
  CHECK(j["converged"] == true);
  CHECK(j.contains("final_objective"));
  CHECK(j.contains("clamping_activated"));

  OnlineDiagnostics o;
  o.t = 5;
  o.step = 0.25;
  const auto k = nlohmann::json::parse(io::online_diagnostics_json(o));
  for (const char* key : {"t", "objective", "step", "min_degree"}) CHECK(k.contains(key));
}

TEST_CASE("graph and stream specs") {
  const GraphSpec g{BarabasiAlbert{3}, 40, 9};
  const auto back = io::graph_spec_from_json(io::graph_spec_to_json(g));
  CHECK(std::get<BarabasiAlbert>(back.kind).m == 3);
  CHECK(back.n == 40);
  CHECK(back.seed == 9);

  StreamSpec s;
  s.sigma = 0.05;
  s.seed = 3;
  s.segments.push_back({GraphSpec{ErdosRenyi{0.1}, 30, 4}, 100});
  s.segments.push_back({RewireOf{0.4, 5, true}, 50});
  const auto t = io::stream_spec_from_json(io::stream_spec_to_json(s));
  REQUIRE(t.segments.size() == 2);
  CHECK(t.segments[0].duration == 100);
  CHECK(std::get<RewireOf>(t.segments[1].source).fraction == 0.4);
  CHECK(io::stream_spec_to_json(t) == io::stream_spec_to_json(s));

  CHECK(std::get<ErdosRenyi>(io::parse_family("er:p=0.25")).p == 0.25);
  CHECK(std::get<BarabasiAlbert>(io::parse_family("ba:m=2")).m == 2);
  CHECK(io::format_family(io::parse_family("er:p=0.1")) == "er:p=0.1");
  CHECK_THROWS_AS(io::parse_family("ws:k=4"), Error);
  CHECK_THROWS_AS(io::parse_family("er:q=0.1"), Error);
}

TEST_CASE("experiment specs") {
  ClassificationSpec c;
  c.sigma = 0.05;
  c.trials = 3;
  c.config.gamma = 0.8;
  const auto back = io::classification_spec_from_json(io::classification_spec_to_json(c));
  CHECK(back.sigma == 0.05);
  CHECK(back.trials == 3);
  CHECK(back.config.gamma == 0.8);
  CHECK(back.classes.size() == 2);
  CHECK(io::classification_spec_to_json(back) == io::classification_spec_to_json(c));
  CHECK_THROWS_AS(io::classification_spec_from_json(R"({"sigmaa": 1})"), Error);

  TrackingSpec t;
  t.switch_at = 300;
  t.config.beta = 0.2;
  const auto u = io::tracking_spec_from_json(io::tracking_spec_to_json(t));
  CHECK(u.switch_at == 300);
  CHECK(u.config.beta == 0.2);
  CHECK(io::tracking_spec_to_json(u) == io::tracking_spec_to_json(t));
}

TEST_CASE("stream records") {
  const io::StreamRecord r{17, 1, {0.5, -1.25, 3.0}};
  const auto back = io::parse_stream_record(io::format_stream_record(r));
  CHECK(back.t == 17);
  CHECK(back.cls == 1);
  CHECK(back.x == r.x);
  CHECK_THROWS_AS(io::parse_stream_record(R"({"t":1,"x":[1,2]})"), Error);
  CHECK_THROWS_AS(io::parse_stream_record(R"({"t":1,"class":0,"x":[1,"a"]})"), Error);
}

TEST_CASE("model json") {
  std::mt19937_64 rng(93);
  std::vector<ClassGraph> graphs;
  for (int c = 0; c < 2; ++c) {
    ClassGraph g;
    g.label = c ? "ba" : "er";
    g.edges = test::random_edges(rng, 5);
    g.basis = gft_decompose(laplacian(g.edges));
    graphs.push_back(g);
  }
  const ClassifierModel model(graphs, 2, true);
  const auto back = io::model_from_json(io::model_to_json(model));
  CHECK(back.bandwidth() == 2);
  CHECK(back.normalized());
  CHECK(back.graph(1).label == "ba");
  CHECK(back.graph(0).edges == model.graph(0).edges);
  CHECK(back.graph(1).basis.eigenvectors == model.graph(1).basis.eigenvectors);
  CHECK(back.graph(1).basis.eigenvalues == model.graph(1).basis.eigenvalues);
  const Vector x = test::uniform_vector(rng, 5, -1, 1);
  CHECK(classify(back, x).energies == classify(model, x).energies);
}

TEST_CASE("price csv") {
  std::istringstream in("date,node_0,node_1\n2020-01-01,10,20\n2020-01-02,11,19\n2020-01-03,12,18\n");
  const auto table = io::read_price_csv(in);
  CHECK(table.dates.size() == 3);
  CHECK(table.prices.rows() == 2);
  CHECK(table.prices.cols() == 3);
  CHECK(table.prices(1, 2) == 18.0);
  std::istringstream bad("date,node_0\n2020-01-01,x\n");
  CHECK_THROWS_AS(io::read_price_csv(bad), Error);
}

TEST_CASE("tracking report rows") {
  TrackingSample s;
  s.t = 3;
  s.distance = 0.5;
  s.bound = 1.0;
  s.objective = 2.0;
  s.optimum = 1.5;
  const auto header = io::tracking_report_header();
  CHECK(header.rfind("time,distance,bound,objective_gap", 0) == 0);
  const auto row = io::tracking_report_row(s);
  CHECK(row.rfind("3,0.5,1,", 0) == 0);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
}
