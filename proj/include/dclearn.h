/* Copyright 2026 the dclearn authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the dclearn shared library.
 *
 * Every function that can fail returns an int status: DCL_OK on success,
 * otherwise one of the DCL_ERR_* codes below. On failure, out-parameters
 * are untouched and dcl_last_error_message() describes what went wrong for
 * the calling thread. Objects created through *_create / generator
 * functions must be released with the matching *_free.
 */

#ifndef DCLEARN_H_
#define DCLEARN_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define DCL_OK 0
#define DCL_ERR_INVALID_ARGUMENT 1
#define DCL_ERR_NUMERIC 2
#define DCL_ERR_NO_CONVERGENCE 3
#define DCL_ERR_SIZE_LIMIT 4
#define DCL_ERR_CONSTRUCTION 5
#define DCL_ERR_IO 6
#define DCL_ERR_STALLED 7
#define DCL_ERR_AGGREGATION 8
#define DCL_ERR_UNKNOWN 99

/* Aggregation methods for dcl_aggregate and dcl_fit_options. */
#define DCL_AGGREGATE_DIRECT 0
#define DCL_AGGREGATE_CONSENSUS 1
#define DCL_AGGREGATE_SHAMIR 2
#define DCL_AGGREGATE_CHUNKED 3

typedef struct dcl_graph dcl_graph;
typedef struct dcl_transition dcl_transition;
typedef struct dcl_dataset dcl_dataset;
typedef struct dcl_model dcl_model;

/* Last error text of the calling thread; empty string if none. The pointer
 * stays valid until the thread's next failing dclearn call. */
const char* dcl_last_error_message(void);

/* ---- communication graphs ---- */

int dcl_graph_ring(int size, dcl_graph** out);
int dcl_graph_complete(int size, dcl_graph** out);
/* Ring plus modular-inverse chords; pass collapse_multi_edges != 0 to cap
 * link multiplicity at one. */
int dcl_graph_inverse_expander(int size, int collapse_multi_edges,
                               dcl_graph** out);
int dcl_graph_random_regular(int size, int degree, uint64_t seed,
                             dcl_graph** out);
void dcl_graph_free(dcl_graph* graph);

int dcl_graph_size(const dcl_graph* graph, int* out);
int dcl_graph_max_degree(const dcl_graph* graph, int* out);
/* Number of directed transmission slots (the sum of all degrees). */
int dcl_graph_total_degree(const dcl_graph* graph, long long* out);
/* Copies the size x size adjacency (link multiplicities) row-major. */
int dcl_graph_adjacency(const dcl_graph* graph, int* out);
/* Brute-force edge expansion; only for graphs of at most 20 nodes. */
int dcl_graph_expansion_constant(const dcl_graph* graph, double* out);
/* Lower bound epsilon * alpha^2 / (2 * degree) on the spectral gap of a
 * degree-regular graph with edge expansion alpha. */
int dcl_expansion_gap_bound(double epsilon, double alpha, int degree,
                            double* out);

/* ---- averaging dynamics ---- */

/* Diffusion step matrix for the graph; epsilon <= 0 picks the safe default
 * 1 / (max_degree + 1). */
int dcl_transition_create(const dcl_graph* graph, double epsilon,
                          dcl_transition** out);
void dcl_transition_free(dcl_transition* transition);
int dcl_transition_epsilon(const dcl_transition* transition, double* out);
/* Second-largest eigenvalue magnitude and the gap 1 - |lambda_2|.
 * dense_limit <= 0 keeps the default switchover to the iterative path. */
int dcl_transition_spectrum(const dcl_transition* transition, int dense_limit,
                            double* second_magnitude, double* gap);

/* Runs averaging to the given relative tolerance. values_out (length n) may
 * be NULL; converged reports 0/1. */
int dcl_consensus_run(const dcl_transition* transition, const double* values,
                      int n, double tolerance, long long max_iterations,
                      double* values_out, long long* iterations,
                      int* converged, double* final_error);
/* First iteration count at which the normalized deviation falls to target;
 * -1 if the budget ran out first. */
int dcl_consensus_iterations_to_error(const dcl_transition* transition,
                                      const double* values, int n,
                                      double target, long long max_iterations,
                                      long long* out);
/* Predicted iterations for a network of `size` nodes to reach relative
 * deviation delta given a spectral gap. */
int dcl_estimate_iterations(int size, double delta, double spectral_gap,
                            long long* out);

/* Deterministic uniform draws in [low, high): same seed, same vector. */
int dcl_random_uniform(uint64_t seed, int n, double low, double high,
                       double* out);

/* ---- privacy-preserving summation ---- */

typedef struct dcl_aggregation_options {
  double epsilon;           /* <= 0 picks the safe default */
  double tolerance;         /* per-round averaging tolerance */
  long long max_iterations; /* per-round iteration budget */
  int num_chunks;           /* chunked method: number of rounds */
  double coefficient_range; /* share masking range; negative = auto */
  double chunk_range;       /* chunk masking range; negative = auto */
  int permute;              /* chunked method: re-seat agents per round */
} dcl_aggregation_options;

/* Fills the option defaults. */
int dcl_aggregation_options_init(dcl_aggregation_options* options);

typedef struct dcl_aggregation_result {
  double value;
  int rounds;
  long long total_iterations;
  long long scalar_messages;
} dcl_aggregation_result;

/* Sums one value per agent over the graph with the chosen method. */
int dcl_aggregate(const dcl_graph* graph, int method, const double* values,
                  int n, uint64_t seed, const dcl_aggregation_options* options,
                  dcl_aggregation_result* out);

/* ---- breach probabilities ---- */

int dcl_breach_single(int size, int degree, int num_chunks, double* out);
int dcl_breach_any(int size, int degree, int num_chunks, double* out);
int dcl_system_security_bound(int size, int max_degree, int num_chunks,
                              double* out);
int dcl_collusion_breach_exact(int size, int degree, int num_colluders,
                               int num_chunks, double* out);
int dcl_collusion_breach_bound(int size, int degree, int num_colluders,
                               int num_chunks, double* out);
int dcl_eavesdrop_breach_exact(long long total_slots, int degree,
                               long long num_tapped, int num_chunks,
                               double* out);
int dcl_eavesdrop_breach_bound(long long total_slots, int degree,
                               long long num_tapped, int num_chunks,
                               double* out);
int dcl_min_chunks_collusion(double risk, int size, int degree,
                             int num_colluders, int* out);
int dcl_min_chunks_eavesdrop(double risk, long long total_slots, int degree,
                             long long num_tapped, int* out);

typedef struct dcl_breach_estimate {
  double probability;
  double ci_low;
  double ci_high;
  long long trials;
  long long hits;
} dcl_breach_estimate;

int dcl_estimate_breach_collusion(int size, int degree, int num_colluders,
                                  int num_chunks, long long trials,
                                  uint64_t seed, dcl_breach_estimate* out);
int dcl_estimate_breach_eavesdrop(long long total_slots, int degree,
                                  long long num_tapped, int num_chunks,
                                  long long trials, uint64_t seed,
                                  dcl_breach_estimate* out);

/* ---- per-agent datasets ---- */

int dcl_dataset_create(dcl_dataset** out);
void dcl_dataset_free(dcl_dataset* dataset);
/* Appends one agent whose samples are read from a numeric CSV file. */
int dcl_dataset_add_csv(dcl_dataset* dataset, const char* path);
/* Appends one agent from a rows x cols row-major buffer. */
int dcl_dataset_add_values(dcl_dataset* dataset, const double* values,
                           int rows, int cols);
int dcl_dataset_num_agents(const dcl_dataset* dataset, int* out);
int dcl_dataset_dim(const dcl_dataset* dataset, int* out);
int dcl_dataset_rows(const dcl_dataset* dataset, int agent, int* out);
/* Copies one agent's samples into a rows x cols row-major buffer. */
int dcl_dataset_get(const dcl_dataset* dataset, int agent, double* out);
/* Writes one agent's samples as CSV (values round-trip exactly). */
int dcl_dataset_write_csv(const dcl_dataset* dataset, int agent,
                          const char* path);
/* Generator-provided component labels; has_labels reports 0/1. */
int dcl_dataset_has_labels(const dcl_dataset* dataset, int* out);
int dcl_dataset_labels(const dcl_dataset* dataset, int agent, int* out);

/* ---- synthetic ground truth ---- */

typedef struct dcl_synth_options {
  int num_agents;
  int num_components;
  int dim;
  int samples_per_agent;
  double skew;              /* boost of each agent's own component */
  double separation;        /* minimum distance between component means */
  double precision_density; /* chance of a nonzero off-diagonal */
  uint64_t seed;
} dcl_synth_options;

/* Fills the option defaults. */
int dcl_synth_options_init(dcl_synth_options* options);

/* Draws a labeled dataset; truth_out receives the generating model (mixing
 * weights, means, precisions). Either output pointer may be NULL. */
int dcl_synth_generate(const dcl_synth_options* options,
                       dcl_dataset** data_out, dcl_model** truth_out);

/* ---- mixture models ---- */

void dcl_model_free(dcl_model* model);
int dcl_model_num_agents(const dcl_model* model, int* out);
int dcl_model_num_components(const dcl_model* model, int* out);
int dcl_model_dim(const dcl_model* model, int* out);
/* Copies the num_agents x num_components mixing weights row-major. */
int dcl_model_weights(const dcl_model* model, double* out);
/* Copies the num_components x dim component means row-major. */
int dcl_model_means(const dcl_model* model, double* out);
/* Copies component k's dim x dim precision row-major. */
int dcl_model_precision(const dcl_model* model, int k, double* out);

/* ---- joint fitting ---- */

typedef struct dcl_fit_options {
  int num_components;
  double weight_smoothing;
  double mean_shrinkage;
  double sparsity;
  double tolerance; /* zero runs exactly max_rounds */
  int max_rounds;
  double glasso_tol;
  int aggregation_method; /* DCL_AGGREGATE_* */
  dcl_aggregation_options aggregation;
  int legacy_covariance;
  uint64_t seed;
} dcl_fit_options;

/* Fills the option defaults. */
int dcl_fit_options_init(dcl_fit_options* options);

/* Fits the shared mixture over the graph. model_out receives the fitted
 * model. trace_out (capacity max_rounds, may be NULL) receives the
 * objective after each round; trace_len, rounds and converged may be NULL
 * when not wanted. */
int dcl_fit(const dcl_graph* graph, const dcl_dataset* dataset,
            const dcl_fit_options* options, dcl_model** model_out,
            double* trace_out, int* trace_len, int* rounds, int* converged);

/* L1-penalized precision estimation of a dim x dim row-major covariance;
 * out receives the dim x dim precision row-major. tol <= 0 and
 * max_sweeps <= 0 select the defaults. */
int dcl_graphical_lasso(const double* covariance, int dim, double penalty,
                        double tol, long long max_sweeps, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DCLEARN_H_ */
