/* C interface to the sgl graph learning library.
 *
 * Objects are opaque handles created by sgl_*_create / sgl_*_load style
 * functions and released with the matching sgl_*_free. Every function that
 * can fail returns an sgl_status; on failure sgl_last_error() describes the
 * problem for the calling thread. Output arrays are caller-allocated; query
 * sizes first.
 */
#ifndef SGL_SGL_H_
#define SGL_SGL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SGL_BUILDING_LIBRARY)
#define SGL_API __attribute__((visibility("default")))
#else
#define SGL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sgl_status {
  SGL_OK = 0,
  SGL_INVALID_ARGUMENT = 1,
  SGL_INVALID_PAIR = 2,
  SGL_DIMENSION_MISMATCH = 3,
  SGL_INPUT_ERROR = 4,
  SGL_DEGENERATE_DEGREE = 5,
  SGL_UNDEFINED = 6,
  SGL_IO_ERROR = 7,
  SGL_OUT_OF_MEMORY = 8,
  SGL_INTERNAL = 9
} sgl_status;

SGL_API const char* sgl_status_string(sgl_status status);
/* Message of the last failure on this thread; empty after success. */
SGL_API const char* sgl_last_error(void);
SGL_API const char* sgl_version(void);

typedef struct sgl_edges sgl_edges;
typedef struct sgl_signals sgl_signals;
typedef struct sgl_classifier sgl_classifier;
typedef struct sgl_stream sgl_stream;
typedef struct sgl_online sgl_online;
typedef struct sgl_tracker sgl_tracker;

/* ---- configuration ---- */

typedef struct sgl_learn_config {
  double alpha;
  double beta;
  double gamma;
  double d_min;
  double step; /* <= 0 selects 2 / eta */
  double tol;
  size_t max_iter;
  int accelerated;
  double edge_threshold;
  int normalize_distances;
} sgl_learn_config;

SGL_API void sgl_learn_config_default(sgl_learn_config* config);
/* Missing keys keep the values already in *config. */
SGL_API sgl_status sgl_learn_config_from_json(const char* json, sgl_learn_config* config);
/* Writes a NUL-terminated JSON object; *length receives the size needed
 * including the terminator. Pass buffer = NULL to query. */
SGL_API sgl_status sgl_learn_config_to_json(const sgl_learn_config* config, char* buffer,
                                            size_t* length);
SGL_API double sgl_lipschitz_constant(const sgl_learn_config* config, int64_t n);

/* ---- pairs and edge vectors ---- */

SGL_API int64_t sgl_pair_count(int64_t n);
SGL_API sgl_status sgl_pair_index(int64_t i, int64_t j, int64_t n, int64_t* k);
SGL_API sgl_status sgl_pair_nodes(int64_t k, int64_t n, int64_t* i, int64_t* j);

SGL_API sgl_status sgl_edges_create(int64_t n, sgl_edges** out);
/* Copies n(n-1)/2 weights in pair order. */
SGL_API sgl_status sgl_edges_from_weights(int64_t n, const double* weights, sgl_edges** out);
/* n = 0 infers the node count. */
SGL_API sgl_status sgl_edges_load_csv(const char* path, int64_t n, sgl_edges** out);
SGL_API sgl_status sgl_edges_save_csv(const sgl_edges* edges, const char* path,
                                      double threshold);
SGL_API void sgl_edges_free(sgl_edges* edges);
SGL_API int64_t sgl_edges_nodes(const sgl_edges* edges);
SGL_API const double* sgl_edges_weights(const sgl_edges* edges);
SGL_API sgl_status sgl_edges_set_weight(sgl_edges* edges, int64_t i, int64_t j, double value);
SGL_API int64_t sgl_edges_count(const sgl_edges* edges, double threshold);
/* degrees: n entries. */
SGL_API sgl_status sgl_edges_degrees(const sgl_edges* edges, double* degrees);
/* laplacian: n*n entries, row-major. */
SGL_API sgl_status sgl_edges_laplacian(const sgl_edges* edges, double* laplacian);
SGL_API sgl_status sgl_total_variation(const sgl_edges* edges, const double* x, double* tv);
/* eigenvalues: n ascending; eigenvectors: n*n row-major, column k pairs with
 * eigenvalue k. */
SGL_API sgl_status sgl_gft(const sgl_edges* edges, double* eigenvalues, double* eigenvectors);

/* ---- signals ---- */

/* data holds `count` signals of n values each, one signal after another. */
SGL_API sgl_status sgl_signals_create(int64_t n, int64_t count, const double* data,
                                      sgl_signals** out);
SGL_API sgl_status sgl_signals_load_csv(const char* path, sgl_signals** out);
SGL_API sgl_status sgl_signals_save_csv(const sgl_signals* signals, const char* path);
SGL_API void sgl_signals_free(sgl_signals* signals);
SGL_API int64_t sgl_signals_nodes(const sgl_signals* signals);
SGL_API int64_t sgl_signals_count(const sgl_signals* signals);
SGL_API sgl_status sgl_signals_get(const sgl_signals* signals, int64_t p, double* x);
/* z: n(n-1)/2 entries. */
SGL_API sgl_status sgl_distance_vector(const sgl_signals* signals, double* z);

/* ---- batch learning ---- */

typedef struct sgl_batch_diagnostics {
  size_t iterations;
  double final_objective;
  int converged;
  int clamping_activated;
  size_t restarts;
} sgl_batch_diagnostics;

/* Learns the graph of class `target` against the other classes. `init` may
 * be NULL. The result is unpruned. */
SGL_API sgl_status sgl_learn_batch(const sgl_signals* const* classes, size_t num_classes,
                                   size_t target, const sgl_learn_config* config,
                                   const sgl_edges* init, sgl_edges** out,
                                   sgl_batch_diagnostics* diagnostics);
SGL_API sgl_status sgl_batch_diagnostics_json(const sgl_batch_diagnostics* d, char* buffer,
                                              size_t* length);

/* ---- classifier ---- */

typedef struct sgl_fit_options {
  size_t bandwidth; /* 0 selects floor(n/3) */
  int normalize_frobenius;
  int parallel;
} sgl_fit_options;

SGL_API void sgl_fit_options_default(sgl_fit_options* options);
SGL_API sgl_status sgl_classifier_fit(const sgl_signals* const* classes, size_t num_classes,
                                      const sgl_learn_config* config,
                                      const sgl_fit_options* options, sgl_classifier** out);
SGL_API sgl_status sgl_classifier_load(const char* path, sgl_classifier** out);
SGL_API sgl_status sgl_classifier_save(const sgl_classifier* model, const char* path);
SGL_API void sgl_classifier_free(sgl_classifier* model);
SGL_API size_t sgl_classifier_classes(const sgl_classifier* model);
SGL_API int64_t sgl_classifier_nodes(const sgl_classifier* model);
SGL_API size_t sgl_classifier_bandwidth(const sgl_classifier* model);
/* energies (may be NULL): one entry per class. */
SGL_API sgl_status sgl_classify(const sgl_classifier* model, const double* x, size_t* label,
                                double* energies, int* tie);
/* curve: n entries, cumulative relative energy on the basis of class `cls`. */
SGL_API sgl_status sgl_cumulative_energy(const sgl_classifier* model, size_t cls,
                                         const double* x, double* curve);
/* Borrowed view of the learned class graph; owned by the model. */
SGL_API const sgl_edges* sgl_classifier_graph(const sgl_classifier* model, size_t cls);
SGL_API sgl_status sgl_classifier_diagnostics(const sgl_classifier* model, size_t cls,
                                              sgl_batch_diagnostics* diagnostics);

/* ---- synthetic data ---- */

typedef enum sgl_graph_kind { SGL_GRAPH_ER = 0, SGL_GRAPH_BA = 1 } sgl_graph_kind;

SGL_API uint64_t sgl_derive_seed(uint64_t seed, uint64_t a, uint64_t b);
/* param is p for ER and m for BA. retries may be NULL. */
SGL_API sgl_status sgl_generate_graph(sgl_graph_kind kind, double param, int64_t n,
                                      uint64_t seed, sgl_edges** out, size_t* retries);
/* warning (may be NULL) receives 1 when the request could not be honored. */
SGL_API sgl_status sgl_rewire(const sgl_edges* edges, double fraction, uint64_t seed,
                              sgl_edges** out, int* warning);
SGL_API sgl_status sgl_generate_signals(const sgl_edges* edges, int64_t count, double sigma,
                                        uint64_t seed, sgl_signals** out, int* warning);
SGL_API int sgl_is_connected(const sgl_edges* edges);

/* Stream from a JSON spec:
 * {"sigma":..,"seed":..,"segments":[{"duration":..,"graph":{"kind":"er","p":..,
 *  "n":..,"seed":..}} | {"duration":..,"rewire":{"fraction":..,"seed":..}}]} */
SGL_API sgl_status sgl_stream_create(const char* spec_json, sgl_stream** out);
SGL_API void sgl_stream_free(sgl_stream* stream);
SGL_API size_t sgl_stream_horizon(const sgl_stream* stream);
SGL_API size_t sgl_stream_segments(const sgl_stream* stream);
SGL_API int64_t sgl_stream_nodes(const sgl_stream* stream);
SGL_API size_t sgl_stream_segment_of(const sgl_stream* stream, size_t t);
SGL_API size_t sgl_stream_segment_start(const sgl_stream* stream, size_t segment);
SGL_API const sgl_edges* sgl_stream_truth(const sgl_stream* stream, size_t segment);
SGL_API sgl_status sgl_stream_signal(const sgl_stream* stream, size_t t, double* x);
SGL_API sgl_status sgl_stream_write_ndjson(const sgl_stream* stream, const char* path);

/* ---- online learning ---- */

typedef enum sgl_memory_kind {
  SGL_MEMORY_EMA = 0,
  SGL_MEMORY_SLIDING = 1,
  SGL_MEMORY_INFINITE = 2
} sgl_memory_kind;

typedef struct sgl_memory {
  sgl_memory_kind kind;
  double theta;  /* EMA */
  size_t window; /* sliding */
} sgl_memory;

typedef struct sgl_online_diagnostics {
  uint64_t t;
  double objective;
  double step;
  double min_degree;
  int clamped;
} sgl_online_diagnostics;

SGL_API sgl_status sgl_online_create(int64_t n, size_t num_classes,
                                     const sgl_learn_config* config, sgl_memory memory,
                                     size_t inner_iters, sgl_online** out);
SGL_API sgl_status sgl_online_clone(const sgl_online* learner, sgl_online** out);
SGL_API void sgl_online_free(sgl_online* learner);
SGL_API sgl_status sgl_online_warm_start(sgl_online* learner, size_t cls,
                                         const sgl_signals* signals);
/* Folds x into the statistic of `cls` and runs the inner updates. */
SGL_API sgl_status sgl_online_ingest(sgl_online* learner, size_t cls, const double* x);
SGL_API sgl_status sgl_online_update_distance(sgl_online* learner, size_t cls, const double* x);
SGL_API sgl_status sgl_online_step(sgl_online* learner, size_t cls);
SGL_API uint64_t sgl_online_time(const sgl_online* learner);
/* Borrowed view, valid until the next mutation of the learner. */
SGL_API const sgl_edges* sgl_online_edges(const sgl_online* learner, size_t cls);
SGL_API sgl_status sgl_online_diagnostics_get(const sgl_online* learner, size_t cls,
                                              sgl_online_diagnostics* diagnostics);
SGL_API sgl_status sgl_online_diagnostics_json(const sgl_online_diagnostics* d, char* buffer,
                                               size_t* length);
/* Batch solution of the current frozen problem of `cls`. */
SGL_API sgl_status sgl_online_oracle(const sgl_online* learner, size_t cls,
                                     const sgl_learn_config* config, sgl_edges** out,
                                     double* optimum);

/* ---- tracking ---- */

typedef struct sgl_tracking_sample {
  uint64_t t;
  double distance;
  double bound;
  double simplified_bound;
  double objective;
  double optimum;
  double contraction;
  int degenerate;
  int clamped;
} sgl_tracking_sample;

/* Single-class tracker: takes ownership of nothing; copies the learner. */
SGL_API sgl_status sgl_tracker_create(const sgl_online* learner,
                                      const sgl_learn_config* oracle_config,
                                      sgl_tracker** out);
SGL_API void sgl_tracker_free(sgl_tracker* tracker);
SGL_API sgl_status sgl_tracker_ingest(sgl_tracker* tracker, const double* x,
                                      sgl_tracking_sample* sample);
SGL_API size_t sgl_tracker_violations(const sgl_tracker* tracker);
SGL_API const sgl_edges* sgl_tracker_estimate(const sgl_tracker* tracker);
SGL_API const sgl_edges* sgl_tracker_optimum(const sgl_tracker* tracker);
SGL_API const char* sgl_tracking_report_header(void);
SGL_API sgl_status sgl_tracking_report_row(const sgl_tracking_sample* sample, char* buffer,
                                           size_t* length);

/* Bounds for t = 1..count given contraction[t-1], inner_iters[t-1] and
 * variation[t-1] for t = 1..count-1. bound and simplified: count entries. */
SGL_API sgl_status sgl_tracking_bound(const double* contraction, const size_t* inner_iters,
                                      const double* variation, size_t count,
                                      double initial_distance, double* bound,
                                      double* simplified);

/* ---- evaluation ---- */

SGL_API sgl_status sgl_edge_score(const sgl_edges* estimate, const sgl_edges* truth,
                                  double threshold, double* precision, double* recall,
                                  double* f_measure);
SGL_API sgl_status sgl_relative_temporal_deviation(const sgl_edges* current,
                                                   const sgl_edges* previous, double* rtd);
SGL_API sgl_status sgl_algebraic_connectivity(const sgl_edges* edges, double* lambda2);

typedef enum sgl_transform { SGL_TRANSFORM_LOG = 0, SGL_TRANSFORM_RDTV = 1 } sgl_transform;

/* prices: n rows of `times` values each (row-major). */
SGL_API sgl_status sgl_series_transform(const double* prices, int64_t n, int64_t times,
                                        sgl_transform mode, sgl_signals** out);
/* Loads a date,node_0.. CSV and applies the transform. */
SGL_API sgl_status sgl_transform_price_csv(const char* path, sgl_transform mode,
                                           sgl_signals** out);

/* ---- experiment protocols ---- */

typedef struct sgl_classification_run sgl_classification_run;
typedef struct sgl_tracking_run sgl_tracking_run;

/* Resolved spec with defaults filled in; spec_json may be NULL or "{}". */
SGL_API sgl_status sgl_classification_spec_resolve(const char* spec_json, char* buffer,
                                                   size_t* length);
SGL_API sgl_status sgl_classification_run_create(const char* spec_json,
                                                 sgl_classification_run** out);
SGL_API void sgl_classification_run_free(sgl_classification_run* run);
SGL_API size_t sgl_classification_run_trials(const sgl_classification_run* run);
SGL_API size_t sgl_classification_run_classes(const sgl_classification_run* run);
SGL_API int64_t sgl_classification_run_nodes(const sgl_classification_run* run);
/* Class label of index `cls` ("er", "ba"); owned by the run. */
SGL_API const char* sgl_classification_run_label(const sgl_classification_run* run, size_t cls);
/* f_measure (may be NULL): one entry per class. */
SGL_API sgl_status sgl_classification_run_trial(const sgl_classification_run* run, size_t trial,
                                                double* accuracy, double* discriminability,
                                                double* f_measure);
SGL_API const sgl_edges* sgl_classification_run_graph(const sgl_classification_run* run,
                                                      size_t trial, size_t cls);
SGL_API const sgl_edges* sgl_classification_run_truth(const sgl_classification_run* run,
                                                      size_t trial, size_t cls);
SGL_API size_t sgl_classification_run_predictions(const sgl_classification_run* run,
                                                  size_t trial);
SGL_API sgl_status sgl_classification_run_prediction(const sgl_classification_run* run,
                                                     size_t trial, size_t index, size_t* truth,
                                                     size_t* label, double* energies, int* tie);
/* curve: n entries; mean over class-`cls` test signals on the `basis` class. */
SGL_API sgl_status sgl_classification_run_curve(const sgl_classification_run* run, size_t trial,
                                                size_t cls, size_t basis, double* curve);
SGL_API sgl_status sgl_classification_run_save_model(const sgl_classification_run* run,
                                                     size_t trial, const char* path);

typedef struct sgl_checkpoint {
  size_t t;
  size_t segment;
  int settled;
  int segment_end;
  double objective_gap;
  double f_online;
  double f_batch;
  sgl_tracking_sample sample;
} sgl_checkpoint;

SGL_API sgl_status sgl_tracking_spec_resolve(const char* spec_json, char* buffer, size_t* length);
SGL_API sgl_status sgl_tracking_run_create(const char* spec_json, sgl_tracking_run** out);
SGL_API void sgl_tracking_run_free(sgl_tracking_run* run);
SGL_API size_t sgl_tracking_run_slots(const sgl_tracking_run* run);
SGL_API sgl_status sgl_tracking_run_sample(const sgl_tracking_run* run, size_t index,
                                           sgl_tracking_sample* sample);
SGL_API size_t sgl_tracking_run_checkpoints(const sgl_tracking_run* run);
SGL_API sgl_status sgl_tracking_run_checkpoint(const sgl_tracking_run* run, size_t index,
                                               sgl_checkpoint* checkpoint);
SGL_API const sgl_edges* sgl_tracking_run_online(const sgl_tracking_run* run, size_t index);
SGL_API const sgl_edges* sgl_tracking_run_batch(const sgl_tracking_run* run, size_t index);
SGL_API const sgl_edges* sgl_tracking_run_truth(const sgl_tracking_run* run, size_t segment);
SGL_API size_t sgl_tracking_run_segments(const sgl_tracking_run* run);
SGL_API size_t sgl_tracking_run_violations(const sgl_tracking_run* run);

#ifdef __cplusplus
}
#endif

#endif /* SGL_SGL_H_ */
