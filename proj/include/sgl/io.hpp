#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sgl/batch.hpp"
#include "sgl/classifier.hpp"
#include "sgl/experiment.hpp"
#include "sgl/online.hpp"
#include "sgl/synth.hpp"

namespace sgl::io {

// Shortest round-trip decimal form.
std::string format_double(double value);

// One signal per row, optional `node_0..node_{N-1}` header; columns of the
// result are the signals.
SignalMatrix read_signal_csv(std::istream& in);
SignalMatrix read_signal_csv(const std::string& path);
void write_signal_csv(std::ostream& out, const SignalMatrix& x);
void write_signal_csv(const std::string& path, const SignalMatrix& x);

// Rows `i,j,weight` with i < j; missing pairs are zero. `n` = 0 infers the
// node count from the largest index.
EdgeVector read_edge_csv(std::istream& in, Index n = 0);
EdgeVector read_edge_csv(const std::string& path, Index n = 0);
// Writes pairs with weight > 0 and >= threshold.
void write_edge_csv(std::ostream& out, const EdgeVector& w, double threshold = 0.0);
void write_edge_csv(const std::string& path, const EdgeVector& w, double threshold = 0.0);
std::string edge_csv_string(const EdgeVector& w, double threshold = 0.0);

// Flat object with keys alpha, beta, gamma, d_min, step, tol, max_iter,
// accelerated, edge_threshold (and normalize_distances). Missing keys keep
// the values of `base`; unknown keys are rejected.
LearnConfig learn_config_from_json(std::string_view json, const LearnConfig& base = {});
std::string learn_config_to_json(const LearnConfig& config);

std::string batch_diagnostics_json(const BatchDiagnostics& d);
std::string online_diagnostics_json(const OnlineDiagnostics& d);

// {"kind":"er","p":..,"n":..,"seed":..} or {"kind":"ba","m":..,...}
std::string graph_spec_to_json(const GraphSpec& spec);
GraphSpec graph_spec_from_json(std::string_view json);

// {"sigma":..,"seed":..,"segments":[{"duration":..,"graph":{..}} or
// {"duration":..,"rewire":{"fraction":..,"seed":..}}]}
std::string stream_spec_to_json(const StreamSpec& spec);
StreamSpec stream_spec_from_json(std::string_view json);

// "er:p=0.1" or "ba:m=3".
GraphFamily parse_family(std::string_view text);
std::string format_family(const GraphFamily& family);

// Nested objects; "config" holds a learn config. Missing keys keep the
// values of `base`, unknown keys are rejected.
ClassificationSpec classification_spec_from_json(std::string_view json,
                                                 const ClassificationSpec& base = {});
std::string classification_spec_to_json(const ClassificationSpec& spec);
TrackingSpec tracking_spec_from_json(std::string_view json, const TrackingSpec& base = {});
std::string tracking_spec_to_json(const TrackingSpec& spec);

struct StreamRecord {
  std::uint64_t t = 0;
  std::size_t cls = 0;
  std::vector<double> x;
};

StreamRecord parse_stream_record(std::string_view line);
std::string format_stream_record(const StreamRecord& record);

std::string model_to_json(const ClassifierModel& model);
ClassifierModel model_from_json(std::string_view json);

struct PriceTable {
  std::vector<std::string> dates;
  Matrix prices;  // N x T
};

// Columns date,node_0..node_{N-1}; one row per date.
PriceTable read_price_csv(std::istream& in);
PriceTable read_price_csv(const std::string& path);

// TrackingReport rows: time,distance,bound,objective_gap followed by the
// extra columns of TrackingSample.
std::string tracking_report_header();
std::string tracking_report_row(const TrackingSample& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace sgl::io
