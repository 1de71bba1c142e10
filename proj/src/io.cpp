#include "sgl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sgl/error.hpp"

namespace sgl::io {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto begin = cell.find_first_not_of(" \t\r");
    const auto end = cell.find_last_not_of(" \t\r");
    cells.push_back(begin == std::string::npos ? std::string() : cell.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

double number_or_fail(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  if (!parse_number(cell, v)) {
    fail(ErrorCode::kInput, "line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
  }
  return v;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string("malformed JSON: ") + e.what());
  }
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

SignalMatrix read_signal_csv(std::istream& in) {
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_csv_line(line);
    double probe = 0.0;
    if (rows.empty() && width == 0 && !parse_number(cells.front(), probe)) {
      width = cells.size();  // header
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(number_or_fail(c, line_no));
    if (width == 0) width = row.size();
    if (row.size() != width) {
      fail(ErrorCode::kInput, "line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(width) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::kInput, "signal CSV holds no signals");
  Matrix data(static_cast<Index>(width), static_cast<Index>(rows.size()));
  for (std::size_t p = 0; p < rows.size(); ++p) {
    for (std::size_t i = 0; i < width; ++i) data(i, p) = rows[p][i];
  }
  return SignalMatrix(std::move(data));
}

SignalMatrix read_signal_csv(const std::string& path) {
  auto in = open_in(path);
  return read_signal_csv(in);
}

void write_signal_csv(std::ostream& out, const SignalMatrix& x) {
  const Matrix& d = x.data();
  for (Index i = 0; i < d.rows(); ++i) out << (i ? "," : "") << "node_" << i;
  out << '\n';
  for (Index p = 0; p < d.cols(); ++p) {
    for (Index i = 0; i < d.rows(); ++i) out << (i ? "," : "") << format_double(d(i, p));
    out << '\n';
  }
}

void write_signal_csv(const std::string& path, const SignalMatrix& x) {
  auto out = open_out(path);
  write_signal_csv(out, x);
}

EdgeVector read_edge_csv(std::istream& in, Index n) {
  struct Row {
    Index i, j;
    double w;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  Index max_node = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_csv_line(line);
    double probe = 0.0;
    if (rows.empty() && !parse_number(cells.front(), probe)) continue;  // header
    if (cells.size() != 3) {
      fail(ErrorCode::kInput, "line " + std::to_string(line_no) + ": expected i,j,weight");
    }
    const double fi = number_or_fail(cells[0], line_no);
    const double fj = number_or_fail(cells[1], line_no);
    const double w = number_or_fail(cells[2], line_no);
    if (fi != std::floor(fi) || fj != std::floor(fj) || fi < 0 || fj < 0) {
      fail(ErrorCode::kInput, "line " + std::to_string(line_no) + ": node ids must be integers");
    }
    const auto i = static_cast<Index>(fi);
    const auto j = static_cast<Index>(fj);
    if (i >= j) {
      fail(ErrorCode::kInvalidPair, "line " + std::to_string(line_no) + ": pairs need i < j");
    }
    max_node = std::max(max_node, j);
    rows.push_back({i, j, w});
  }
  if (n == 0) n = std::max<Index>(max_node + 1, 2);
  if (max_node >= n) fail(ErrorCode::kInvalidPair, "edge list references a node >= n");
  EdgeVector out(n);
  for (const auto& r : rows) out.set_weight(r.i, r.j, r.w);
  return out;
}

EdgeVector read_edge_csv(const std::string& path, Index n) {
  auto in = open_in(path);
  return read_edge_csv(in, n);
}

void write_edge_csv(std::ostream& out, const EdgeVector& w, double threshold) {
  out << "i,j,weight\n";
  Index k = 0;
  for (Index i = 0; i < w.nodes(); ++i) {
    for (Index j = i + 1; j < w.nodes(); ++j, ++k) {
      if (w[k] > 0.0 && w[k] >= threshold) {
        out << i << ',' << j << ',' << format_double(w[k]) << '\n';
      }
    }
  }
}

void write_edge_csv(const std::string& path, const EdgeVector& w, double threshold) {
  auto out = open_out(path);
  write_edge_csv(out, w, threshold);
}

std::string edge_csv_string(const EdgeVector& w, double threshold) {
  std::ostringstream out;
  write_edge_csv(out, w, threshold);
  return out.str();
}

namespace {

LearnConfig learn_config_from(const json& j, const LearnConfig& base) {
  if (!j.is_object()) fail(ErrorCode::kInput, "learn config must be a JSON object");
  LearnConfig c = base;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "alpha") c.alpha = value.get<double>();
      else if (key == "beta") c.beta = value.get<double>();
      else if (key == "gamma") c.gamma = value.get<double>();
      else if (key == "d_min") c.d_min = value.get<double>();
      else if (key == "step") c.step = value.is_null() ? std::nullopt : std::optional(value.get<double>());
      else if (key == "tol") c.tol = value.get<double>();
      else if (key == "max_iter") c.max_iter = value.get<std::size_t>();
      else if (key == "accelerated") c.accelerated = value.get<bool>();
      else if (key == "edge_threshold") c.edge_threshold = value.get<double>();
      else if (key == "normalize_distances") c.normalize_distances = value.get<bool>();
      else fail(ErrorCode::kInput, "unknown learn config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string("bad learn config value: ") + e.what());
  }
  return c;
}

json learn_config_json(const LearnConfig& c) {
  return {{"alpha", c.alpha},
            {"beta", c.beta},
            {"gamma", c.gamma},
            {"d_min", c.d_min},
            {"step", c.step ? json(*c.step) : json(nullptr)},
            {"tol", c.tol},
            {"max_iter", c.max_iter},
            {"accelerated", c.accelerated},
            {"edge_threshold", c.edge_threshold},
            {"normalize_distances", c.normalize_distances}};
}

}  // namespace

LearnConfig learn_config_from_json(std::string_view text, const LearnConfig& base) {
  return learn_config_from(parse_json(text), base);
}

std::string learn_config_to_json(const LearnConfig& c) { return learn_config_json(c).dump(); }

std::string batch_diagnostics_json(const BatchDiagnostics& d) {
  json j = {{"iterations", d.iterations},
            {"final_objective", d.final_objective},
            {"converged", d.converged},
            {"clamping_activated", d.clamping_activated},
            {"restarts", d.restarts}};
  return j.dump();
}

std::string online_diagnostics_json(const OnlineDiagnostics& d) {
  json j = {{"t", d.t}, {"objective", d.objective}, {"step", d.step}, {"min_degree", d.min_degree},
            {"clamped", d.clamped}};
  return j.dump();
}

namespace {

json graph_spec_json(const GraphSpec& g) {
  json j = {{"n", g.n}, {"seed", g.seed}};
  if (const auto* er = std::get_if<ErdosRenyi>(&g.kind)) {
    j["kind"] = "er";
    j["p"] = er->p;
  } else {
    j["kind"] = "ba";
    j["m"] = std::get<BarabasiAlbert>(g.kind).m;
  }
  return j;
}

GraphSpec graph_spec_from(const json& j) {
  GraphSpec g;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "er") g.kind = ErdosRenyi{j.at("p").get<double>()};
  else if (kind == "ba") g.kind = BarabasiAlbert{j.at("m").get<Index>()};
  else fail(ErrorCode::kInput, "unknown graph kind '" + kind + "'");
  g.n = j.at("n").get<Index>();
  g.seed = j.value("seed", std::uint64_t{0});
  return g;
}

}  // namespace

std::string graph_spec_to_json(const GraphSpec& spec) { return graph_spec_json(spec).dump(); }

GraphSpec graph_spec_from_json(std::string_view text) {
  const json j = parse_json(text);
  try {
    return graph_spec_from(j);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string("bad graph spec: ") + e.what());
  }
}

std::string stream_spec_to_json(const StreamSpec& spec) {
  json segments = json::array();
  for (const auto& seg : spec.segments) {
    json s = {{"duration", seg.duration}};
    if (const auto* g = std::get_if<GraphSpec>(&seg.source)) {
      s["graph"] = graph_spec_json(*g);
    } else {
      const auto& r = std::get<RewireOf>(seg.source);
      s["rewire"] = {{"fraction", r.fraction},
                     {"seed", r.seed},
                     {"require_connected", r.require_connected}};
    }
    segments.push_back(std::move(s));
  }
  json j = {{"sigma", spec.sigma}, {"seed", spec.seed}, {"segments", std::move(segments)}};
  return j.dump();
}

StreamSpec stream_spec_from_json(std::string_view text) {
  const json j = parse_json(text);
  try {
    StreamSpec spec;
    spec.sigma = j.at("sigma").get<double>();
    spec.seed = j.value("seed", std::uint64_t{0});
    for (const auto& s : j.at("segments")) {
      StreamSegment seg;
      seg.duration = s.at("duration").get<std::size_t>();
      if (s.contains("graph")) {
        seg.source = graph_spec_from(s.at("graph"));
      } else if (s.contains("rewire")) {
        const auto& r = s.at("rewire");
        seg.source = RewireOf{r.at("fraction").get<double>(), r.value("seed", std::uint64_t{0}),
                              r.value("require_connected", true)};
      } else {
        fail(ErrorCode::kInput, "stream segment needs 'graph' or 'rewire'");
      }
      spec.segments.push_back(std::move(seg));
    }
    return spec;
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string("bad stream spec: ") + e.what());
  }
}

GraphFamily parse_family(std::string_view text) {
  const std::string s(text);
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  std::string key, value;
  if (colon != std::string::npos) {
    const auto eq = s.find('=', colon);
    if (eq == std::string::npos) fail(ErrorCode::kInput, "expected key=value in '" + s + "'");
    key = s.substr(colon + 1, eq - colon - 1);
    value = s.substr(eq + 1);
  }
  double v = 0.0;
  if (!value.empty() && !parse_number(value, v)) {
    fail(ErrorCode::kInput, "not a number in '" + s + "'");
  }
  if (kind == "er") {
    if (!key.empty() && key != "p") fail(ErrorCode::kInput, "er takes p, got '" + key + "'");
    return ErdosRenyi{value.empty() ? 0.1 : v};
  }
  if (kind == "ba") {
    if (!key.empty() && key != "m") fail(ErrorCode::kInput, "ba takes m, got '" + key + "'");
    if (!value.empty() && v != std::floor(v)) fail(ErrorCode::kInput, "m must be an integer");
    return BarabasiAlbert{value.empty() ? 3 : static_cast<Index>(v)};
  }
  fail(ErrorCode::kInput, "unknown graph family '" + kind + "'");
}

std::string format_family(const GraphFamily& family) {
  if (const auto* er = std::get_if<ErdosRenyi>(&family)) return "er:p=" + format_double(er->p);
  return "ba:m=" + std::to_string(std::get<BarabasiAlbert>(family).m);
}

ClassificationSpec classification_spec_from_json(std::string_view text,
                                                 const ClassificationSpec& base) {
  const json j = parse_json(text);
  if (!j.is_object()) fail(ErrorCode::kInput, "classification spec must be a JSON object");
  ClassificationSpec s = base;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "classes") {
        s.classes.clear();
        for (const auto& c : value) s.classes.push_back(parse_family(c.get<std::string>()));
      } else if (key == "n") s.n = value.get<Index>();
      else if (key == "signals") s.signals = value.get<std::size_t>();
      else if (key == "sigma") s.sigma = value.get<double>();
      else if (key == "seed") s.seed = value.get<std::uint64_t>();
      else if (key == "trials") s.trials = value.get<std::size_t>();
      else if (key == "train_fraction") s.train_fraction = value.get<double>();
      else if (key == "config") s.config = learn_config_from(value, s.config);
      else if (key == "bandwidth") s.bandwidth = value.get<std::size_t>();
      else if (key == "normalize_frobenius") s.normalize_frobenius = value.get<bool>();
      else if (key == "parallel") s.parallel = value.get<bool>();
      else fail(ErrorCode::kInput, "unknown classification key '" + key + "'");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string("bad classification spec: ") + e.what());
  }
  return s;
}

std::string classification_spec_to_json(const ClassificationSpec& s) {
  json classes = json::array();
  for (const auto& c : s.classes) classes.push_back(format_family(c));
  json j = {{"classes", classes},
            {"n", s.n},
            {"signals", s.signals},
            {"sigma", s.sigma},
            {"seed", s.seed},
            {"trials", s.trials},
            {"train_fraction", s.train_fraction},
            {"config", learn_config_json(s.config)},
            {"bandwidth", s.bandwidth},
            {"normalize_frobenius", s.normalize_frobenius},
            {"parallel", s.parallel}};
  return j.dump(2);
}

TrackingSpec tracking_spec_from_json(std::string_view text, const TrackingSpec& base) {
  const json j = parse_json(text);
  if (!j.is_object()) fail(ErrorCode::kInput, "tracking spec must be a JSON object");
  TrackingSpec s = base;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n") s.n = value.get<Index>();
      else if (key == "p") s.p = value.get<double>();
      else if (key == "switch_at") s.switch_at = value.get<std::size_t>();
      else if (key == "horizon") s.horizon = value.get<std::size_t>();
      else if (key == "rewire") s.rewire = value.get<double>();
      else if (key == "sigma") s.sigma = value.get<double>();
      else if (key == "theta") s.theta = value.get<double>();
      else if (key == "seed") s.seed = value.get<std::uint64_t>();
      else if (key == "checkpoint") s.checkpoint = value.get<std::size_t>();
      else if (key == "warmup_signals") s.warmup_signals = value.get<std::size_t>();
      else if (key == "settle") s.settle = value.get<std::size_t>();
      else if (key == "inner_iters") s.inner_iters = value.get<std::size_t>();
      else if (key == "config") s.config = learn_config_from(value, s.config);
      else if (key == "oracle") s.oracle = learn_config_from(value, s.oracle);
      else fail(ErrorCode::kInput, "unknown tracking key '" + key + "'");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string("bad tracking spec: ") + e.what());
  }
  return s;
}

std::string tracking_spec_to_json(const TrackingSpec& s) {
  json j = {{"n", s.n},
            {"p", s.p},
            {"switch_at", s.switch_at},
            {"horizon", s.resolved_horizon()},
            {"rewire", s.rewire},
            {"sigma", s.sigma},
            {"theta", s.theta},
            {"seed", s.seed},
            {"checkpoint", s.checkpoint},
            {"warmup_signals", s.warmup_signals},
            {"settle", s.settle},
            {"inner_iters", s.inner_iters},
            {"config", learn_config_json(s.config)},
            {"oracle", learn_config_json(s.oracle)}};
  return j.dump(2);
}

StreamRecord parse_stream_record(std::string_view line) {
  const json j = parse_json(line);
  StreamRecord r;
  try {
    r.t = j.at("t").get<std::uint64_t>();
    r.cls = j.at("class").get<std::size_t>();
    r.x = j.at("x").get<std::vector<double>>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string("bad stream record: ") + e.what());
  }
  for (double v : r.x) {
    if (!std::isfinite(v)) fail(ErrorCode::kInput, "stream record has non-finite entries");
  }
  return r;
}

std::string format_stream_record(const StreamRecord& r) {
  std::string out = "{\"t\":" + std::to_string(r.t) + ",\"class\":" + std::to_string(r.cls) + ",\"x\":[";
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    if (i) out += ',';
    out += format_double(r.x[i]);
  }
  out += "]}";
  return out;
}

std::string model_to_json(const ClassifierModel& model) {
  json classes = json::array();
  json per_class = json::array();
  for (const auto& g : model.graphs()) {
    classes.push_back(g.label);
    json vectors = json::array();
    const Matrix& v = g.basis.eigenvectors;
    for (Index i = 0; i < v.rows(); ++i) {
      for (Index k = 0; k < v.cols(); ++k) vectors.push_back(v(i, k));
    }
    json edges = json::array();
    for (const auto& [i, j] : g.edges.edges(0.0)) edges.push_back({i, j, g.edges.weight(i, j)});
    per_class.push_back({{"label", g.label},
                         {"nodes", g.edges.nodes()},
                         {"eigenvalues", vector_json(g.basis.eigenvalues)},
                         {"eigenvectors", std::move(vectors)},
                         {"edges", std::move(edges)}});
  }
  json j = {{"classes", classes},
            {"bandwidth", model.bandwidth()},
            {"normalized", model.normalized()},
            {"per_class", per_class}};
  return j.dump();
}

ClassifierModel model_from_json(std::string_view text) {
  const json j = parse_json(text);
  try {
    std::vector<ClassGraph> graphs;
    for (const auto& c : j.at("per_class")) {
      ClassGraph g;
      g.label = c.at("label").get<std::string>();
      const auto n = c.at("nodes").get<Index>();
      const auto lambda = c.at("eigenvalues").get<std::vector<double>>();
      const auto flat = c.at("eigenvectors").get<std::vector<double>>();
      if (static_cast<Index>(lambda.size()) != n || static_cast<Index>(flat.size()) != n * n) {
        fail(ErrorCode::kInput, "model basis has inconsistent sizes");
      }
      g.basis.eigenvalues = Eigen::Map<const Vector>(lambda.data(), n);
      g.basis.eigenvectors =
          Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
              flat.data(), n, n);
      g.edges = EdgeVector(n);
      for (const auto& e : c.at("edges")) {
        g.edges.set_weight(e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>());
      }
      graphs.push_back(std::move(g));
    }
    return ClassifierModel(std::move(graphs), j.at("bandwidth").get<std::size_t>(),
                           j.value("normalized", false));
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string("bad model JSON: ") + e.what());
  }
}

PriceTable read_price_csv(std::istream& in) {
  PriceTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < 2) fail(ErrorCode::kInput, "price CSV needs date and node columns");
    if (!header_seen) {
      header_seen = true;
      double probe = 0.0;
      if (!parse_number(cells[1], probe)) {
        width = cells.size() - 1;
        continue;
      }
    }
    if (width == 0) width = cells.size() - 1;
    if (cells.size() - 1 != width) {
      fail(ErrorCode::kInput, "line " + std::to_string(line_no) + ": ragged price row");
    }
    table.dates.push_back(cells[0]);
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(number_or_fail(cells[c], line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::kInput, "price CSV holds no rows");
  table.prices.resize(static_cast<Index>(width), static_cast<Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t i = 0; i < width; ++i) table.prices(i, t) = rows[t][i];
  }
  return table;
}

PriceTable read_price_csv(const std::string& path) {
  auto in = open_in(path);
  return read_price_csv(in);
}

std::string tracking_report_header() {
  return "time,distance,bound,objective_gap,simplified_bound,objective,optimum,contraction,"
         "degenerate,clamped";
}

std::string tracking_report_row(const TrackingSample& s) {
  return std::to_string(s.t) + ',' + format_double(s.distance) + ',' + format_double(s.bound) +
         ',' + format_double(s.objective - s.optimum) + ',' + format_double(s.simplified_bound) +
         ',' + format_double(s.objective) + ',' + format_double(s.optimum) + ',' +
         format_double(s.contraction) + ',' + (s.degenerate ? "1" : "0") + ',' +
         (s.clamped ? "1" : "0");
}

std::string read_file(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  auto out = open_out(path);
  out << content;
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace sgl::io
