// Copyright 2026 the dclearn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dclearn.h"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dclearn/consensus.hpp"
#include "dclearn/error.hpp"
#include "dclearn/graph.hpp"
#include "dclearn/learning.hpp"
#include "dclearn/privacy.hpp"
#include "dclearn/rng.hpp"
#include "dclearn/sharing.hpp"
#include "dclearn/simnet.hpp"
#include "dclearn/synth.hpp"

struct dcl_graph {
  dcl::Graph graph;
};

struct dcl_transition {
  dcl::TransitionMatrix transition;
};

struct dcl_dataset {
  std::vector<Eigen::MatrixXd> agents;
  std::vector<std::vector<int>> labels;
  bool has_labels = false;
};

struct dcl_model {
  dcl::MixtureModel model;
};

namespace {

thread_local std::string g_last_error;

// Every API entry point funnels through here: run the body, trap anything
// thrown, and report it as a status code plus the thread-local message.
template <typename F>
int guarded(F&& body) {
  try {
    body();
    return DCL_OK;
  } catch (const dcl::Error& error) {
    g_last_error = error.what();
    return static_cast<int>(error.code());
  } catch (const std::exception& error) {
    g_last_error = error.what();
    return DCL_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unrecognized failure";
    return DCL_ERR_UNKNOWN;
  }
}

void need(const void* pointer, const char* what) {
  dcl::require(pointer != nullptr, dcl::ErrorCode::invalid_argument,
               std::string("null ") + what + " argument");
}

Eigen::VectorXd copy_vector(const double* values, int n, const char* what) {
  need(values, what);
  dcl::require(n >= 1, dcl::ErrorCode::invalid_argument,
               std::string(what) + " length must be positive");
  return Eigen::Map<const Eigen::VectorXd>(values, n);
}

using RowMajorMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>;
using ConstRowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;

void export_matrix(const Eigen::MatrixXd& matrix, double* out) {
  RowMajorMap(out, matrix.rows(), matrix.cols()) = matrix;
}

int wrap_graph(dcl::Graph graph, dcl_graph** out) {
  need(out, "output");
  *out = new dcl_graph{std::move(graph)};
  return DCL_OK;
}

dcl::AggregationOptions convert_aggregation_options(
    const dcl_aggregation_options* options) {
  dcl::AggregationOptions converted;
  if (options == nullptr) return converted;
  converted.epsilon = options->epsilon;
  converted.tolerance = options->tolerance;
  converted.max_iterations = static_cast<long>(options->max_iterations);
  converted.num_chunks = options->num_chunks;
  converted.coefficient_range = options->coefficient_range;
  converted.chunk_range = options->chunk_range;
  converted.permute = options->permute != 0;
  return converted;
}

dcl::AggregationMethod convert_method(int method) {
  dcl::require(method >= DCL_AGGREGATE_DIRECT && method <= DCL_AGGREGATE_CHUNKED,
               dcl::ErrorCode::invalid_argument,
               "aggregation method must be one of the DCL_AGGREGATE_* values");
  return static_cast<dcl::AggregationMethod>(method);
}

const std::vector<Eigen::MatrixXd>& dataset_agents(const dcl_dataset* dataset) {
  need(dataset, "dataset");
  return dataset->agents;
}

int dataset_agent_index(const dcl_dataset* dataset, int agent) {
  const auto& agents = dataset_agents(dataset);
  dcl::require(agent >= 0 && agent < static_cast<int>(agents.size()),
               dcl::ErrorCode::invalid_argument, "agent index out of range");
  return agent;
}

void dataset_append(dcl_dataset* dataset, Eigen::MatrixXd samples) {
  if (!dataset->agents.empty()) {
    dcl::require(samples.cols() == dataset->agents.front().cols(),
                 dcl::ErrorCode::invalid_argument,
                 "all agents must share the same sample dimension");
  }
  dataset->agents.push_back(std::move(samples));
  // Hand-assembled datasets carry no generator labels.
  dataset->labels.clear();
  dataset->has_labels = false;
}

constexpr std::uint64_t kUniformSalt = 0x756e6966ULL;

}  // namespace

extern "C" {

const char* dcl_last_error_message(void) { return g_last_error.c_str(); }

/* ---- communication graphs ---- */

int dcl_graph_ring(int size, dcl_graph** out) {
  return guarded([&] { wrap_graph(dcl::make_ring(size), out); });
}

int dcl_graph_complete(int size, dcl_graph** out) {
  return guarded([&] { wrap_graph(dcl::make_complete(size), out); });
}

int dcl_graph_inverse_expander(int size, int collapse_multi_edges,
                               dcl_graph** out) {
  return guarded([&] {
    wrap_graph(dcl::make_inverse_expander(size, collapse_multi_edges != 0),
               out);
  });
}

int dcl_graph_random_regular(int size, int degree, uint64_t seed,
                             dcl_graph** out) {
  return guarded(
      [&] { wrap_graph(dcl::make_random_regular(size, degree, seed), out); });
}

void dcl_graph_free(dcl_graph* graph) { delete graph; }

int dcl_graph_size(const dcl_graph* graph, int* out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output");
    *out = graph->graph.size();
  });
}

int dcl_graph_max_degree(const dcl_graph* graph, int* out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output");
    *out = graph->graph.max_degree();
  });
}

int dcl_graph_total_degree(const dcl_graph* graph, long long* out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output");
    *out = static_cast<long long>(graph->graph.total_degree());
  });
}

int dcl_graph_adjacency(const dcl_graph* graph, int* out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output");
    const Eigen::MatrixXi& adjacency = graph->graph.adjacency;
    Eigen::Map<Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>(out, adjacency.rows(),
                                               adjacency.cols()) = adjacency;
  });
}

int dcl_graph_expansion_constant(const dcl_graph* graph, double* out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output");
    *out = dcl::expansion_constant(graph->graph);
  });
}

int dcl_expansion_gap_bound(double epsilon, double alpha, int degree,
                            double* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::expansion_gap_bound(epsilon, alpha, degree);
  });
}

/* ---- averaging dynamics ---- */

int dcl_transition_create(const dcl_graph* graph, double epsilon,
                          dcl_transition** out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output");
    *out = new dcl_transition{dcl::make_transition(graph->graph, epsilon)};
  });
}

void dcl_transition_free(dcl_transition* transition) { delete transition; }

int dcl_transition_epsilon(const dcl_transition* transition, double* out) {
  return guarded([&] {
    need(transition, "transition");
    need(out, "output");
    *out = transition->transition.epsilon;
  });
}

int dcl_transition_spectrum(const dcl_transition* transition, int dense_limit,
                            double* second_magnitude, double* gap) {
  return guarded([&] {
    need(transition, "transition");
    const dcl::SpectralInfo info =
        dense_limit > 0
            ? dcl::analyze_spectrum(transition->transition, dense_limit)
            : dcl::analyze_spectrum(transition->transition);
    if (second_magnitude != nullptr) *second_magnitude = info.second_magnitude;
    if (gap != nullptr) *gap = info.gap;
  });
}

int dcl_consensus_run(const dcl_transition* transition, const double* values,
                      int n, double tolerance, long long max_iterations,
                      double* values_out, long long* iterations,
                      int* converged, double* final_error) {
  return guarded([&] {
    need(transition, "transition");
    const Eigen::VectorXd start = copy_vector(values, n, "values");
    dcl::ConsensusOptions options;
    options.tolerance = tolerance;
    options.max_iterations = static_cast<long>(max_iterations);
    options.record_trace = false;
    const dcl::ConsensusRun run =
        dcl::run_consensus(transition->transition, start, options);
    if (values_out != nullptr) {
      Eigen::Map<Eigen::VectorXd>(values_out, run.values.size()) = run.values;
    }
    if (iterations != nullptr) *iterations = run.iterations;
    if (converged != nullptr) *converged = run.converged ? 1 : 0;
    if (final_error != nullptr) *final_error = run.final_error;
  });
}

int dcl_consensus_iterations_to_error(const dcl_transition* transition,
                                      const double* values, int n,
                                      double target, long long max_iterations,
                                      long long* out) {
  return guarded([&] {
    need(transition, "transition");
    need(out, "output");
    const Eigen::VectorXd start = copy_vector(values, n, "values");
    *out = dcl::iterations_to_error(transition->transition, start, target,
                                    static_cast<long>(max_iterations));
  });
}

int dcl_estimate_iterations(int size, double delta, double spectral_gap,
                            long long* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::estimate_iterations(size, delta, spectral_gap);
  });
}

int dcl_random_uniform(uint64_t seed, int n, double low, double high,
                       double* out) {
  return guarded([&] {
    need(out, "output");
    dcl::require(n >= 1, dcl::ErrorCode::invalid_argument,
                 "draw count must be positive");
    dcl::require(low < high, dcl::ErrorCode::invalid_argument,
                 "low bound must be below high bound");
    std::mt19937_64 engine = dcl::make_engine(seed, kUniformSalt);
    std::uniform_real_distribution<double> uniform(low, high);
    for (int i = 0; i < n; ++i) out[i] = uniform(engine);
  });
}

/* ---- privacy-preserving summation ---- */

int dcl_aggregation_options_init(dcl_aggregation_options* options) {
  return guarded([&] {
    need(options, "options");
    const dcl::AggregationOptions defaults;
    options->epsilon = defaults.epsilon;
    options->tolerance = defaults.tolerance;
    options->max_iterations = defaults.max_iterations;
    options->num_chunks = defaults.num_chunks;
    options->coefficient_range = defaults.coefficient_range;
    options->chunk_range = defaults.chunk_range;
    options->permute = defaults.permute ? 1 : 0;
  });
}

int dcl_aggregate(const dcl_graph* graph, int method, const double* values,
                  int n, uint64_t seed, const dcl_aggregation_options* options,
                  dcl_aggregation_result* out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output");
    const Eigen::VectorXd start = copy_vector(values, n, "values");
    const dcl::AggregationRun run =
        dcl::aggregate(graph->graph, convert_method(method), start, seed,
                       convert_aggregation_options(options));
    out->value = run.value;
    out->rounds = run.rounds;
    out->total_iterations = run.total_iterations;
    out->scalar_messages = run.scalar_messages;
  });
}

/* ---- breach probabilities ---- */

int dcl_breach_single(int size, int degree, int num_chunks, double* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::breach_single(size, degree, num_chunks);
  });
}

int dcl_breach_any(int size, int degree, int num_chunks, double* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::breach_any(size, degree, num_chunks);
  });
}

int dcl_system_security_bound(int size, int max_degree, int num_chunks,
                              double* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::system_security_bound(size, max_degree, num_chunks);
  });
}

int dcl_collusion_breach_exact(int size, int degree, int num_colluders,
                               int num_chunks, double* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::collusion_breach_exact(size, degree, num_colluders, num_chunks);
  });
}

int dcl_collusion_breach_bound(int size, int degree, int num_colluders,
                               int num_chunks, double* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::collusion_breach_bound(size, degree, num_colluders, num_chunks);
  });
}

int dcl_eavesdrop_breach_exact(long long total_slots, int degree,
                               long long num_tapped, int num_chunks,
                               double* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::eavesdrop_breach_exact(static_cast<long>(total_slots), degree,
                                       static_cast<long>(num_tapped),
                                       num_chunks);
  });
}

int dcl_eavesdrop_breach_bound(long long total_slots, int degree,
                               long long num_tapped, int num_chunks,
                               double* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::eavesdrop_breach_bound(static_cast<long>(total_slots), degree,
                                       static_cast<long>(num_tapped),
                                       num_chunks);
  });
}

int dcl_min_chunks_collusion(double risk, int size, int degree,
                             int num_colluders, int* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::min_chunks_collusion(risk, size, degree, num_colluders);
  });
}

int dcl_min_chunks_eavesdrop(double risk, long long total_slots, int degree,
                             long long num_tapped, int* out) {
  return guarded([&] {
    need(out, "output");
    *out = dcl::min_chunks_eavesdrop(risk, static_cast<long>(total_slots),
                                     degree, static_cast<long>(num_tapped));
  });
}

int dcl_estimate_breach_collusion(int size, int degree, int num_colluders,
                                  int num_chunks, long long trials,
                                  uint64_t seed, dcl_breach_estimate* out) {
  return guarded([&] {
    need(out, "output");
    const dcl::BreachEstimate estimate = dcl::estimate_breach_collusion(
        size, degree, num_colluders, num_chunks, static_cast<long>(trials),
        seed);
    out->probability = estimate.probability;
    out->ci_low = estimate.ci_low;
    out->ci_high = estimate.ci_high;
    out->trials = estimate.trials;
    out->hits = estimate.hits;
  });
}

int dcl_estimate_breach_eavesdrop(long long total_slots, int degree,
                                  long long num_tapped, int num_chunks,
                                  long long trials, uint64_t seed,
                                  dcl_breach_estimate* out) {
  return guarded([&] {
    need(out, "output");
    const dcl::BreachEstimate estimate = dcl::estimate_breach_eavesdrop(
        static_cast<long>(total_slots), degree, static_cast<long>(num_tapped),
        num_chunks, static_cast<long>(trials), seed);
    out->probability = estimate.probability;
    out->ci_low = estimate.ci_low;
    out->ci_high = estimate.ci_high;
    out->trials = estimate.trials;
    out->hits = estimate.hits;
  });
}

/* ---- per-agent datasets ---- */

int dcl_dataset_create(dcl_dataset** out) {
  return guarded([&] {
    need(out, "output");
    *out = new dcl_dataset{};
  });
}

void dcl_dataset_free(dcl_dataset* dataset) { delete dataset; }

int dcl_dataset_add_csv(dcl_dataset* dataset, const char* path) {
  return guarded([&] {
    need(dataset, "dataset");
    need(path, "path");
    dataset_append(dataset, dcl::read_csv_matrix(path));
  });
}

int dcl_dataset_add_values(dcl_dataset* dataset, const double* values,
                           int rows, int cols) {
  return guarded([&] {
    need(dataset, "dataset");
    need(values, "values");
    dcl::require(rows >= 1 && cols >= 1, dcl::ErrorCode::invalid_argument,
                 "sample matrix must have positive rows and columns");
    dataset_append(dataset, ConstRowMajorMap(values, rows, cols));
  });
}

int dcl_dataset_num_agents(const dcl_dataset* dataset, int* out) {
  return guarded([&] {
    need(out, "output");
    *out = static_cast<int>(dataset_agents(dataset).size());
  });
}

int dcl_dataset_dim(const dcl_dataset* dataset, int* out) {
  return guarded([&] {
    need(out, "output");
    const auto& agents = dataset_agents(dataset);
    *out = agents.empty() ? 0 : static_cast<int>(agents.front().cols());
  });
}

int dcl_dataset_rows(const dcl_dataset* dataset, int agent, int* out) {
  return guarded([&] {
    need(out, "output");
    const int index = dataset_agent_index(dataset, agent);
    *out = static_cast<int>(dataset->agents[index].rows());
  });
}

int dcl_dataset_get(const dcl_dataset* dataset, int agent, double* out) {
  return guarded([&] {
    need(out, "output");
    const int index = dataset_agent_index(dataset, agent);
    export_matrix(dataset->agents[index], out);
  });
}

int dcl_dataset_write_csv(const dcl_dataset* dataset, int agent,
                          const char* path) {
  return guarded([&] {
    need(path, "path");
    const int index = dataset_agent_index(dataset, agent);
    dcl::write_csv_matrix(path, dataset->agents[index]);
  });
}

int dcl_dataset_has_labels(const dcl_dataset* dataset, int* out) {
  return guarded([&] {
    need(dataset, "dataset");
    need(out, "output");
    *out = dataset->has_labels ? 1 : 0;
  });
}

int dcl_dataset_labels(const dcl_dataset* dataset, int agent, int* out) {
  return guarded([&] {
    need(out, "output");
    const int index = dataset_agent_index(dataset, agent);
    dcl::require(dataset->has_labels, dcl::ErrorCode::invalid_argument,
                 "dataset carries no component labels");
    const std::vector<int>& labels = dataset->labels[index];
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i];
  });
}

/* ---- synthetic ground truth ---- */

int dcl_synth_options_init(dcl_synth_options* options) {
  return guarded([&] {
    need(options, "options");
    const dcl::SynthOptions defaults;
    options->num_agents = defaults.num_agents;
    options->num_components = defaults.num_components;
    options->dim = defaults.dim;
    options->samples_per_agent = defaults.samples_per_agent;
    options->skew = defaults.skew;
    options->separation = defaults.separation;
    options->precision_density = defaults.precision_density;
    options->seed = defaults.seed;
  });
}

int dcl_synth_generate(const dcl_synth_options* options, dcl_dataset** data_out,
                       dcl_model** truth_out) {
  return guarded([&] {
    dcl::SynthOptions converted;
    if (options != nullptr) {
      converted.num_agents = options->num_agents;
      converted.num_components = options->num_components;
      converted.dim = options->dim;
      converted.samples_per_agent = options->samples_per_agent;
      converted.skew = options->skew;
      converted.separation = options->separation;
      converted.precision_density = options->precision_density;
      converted.seed = options->seed;
    }
    dcl::SynthData data = dcl::make_synthetic(converted);
    if (data_out != nullptr) {
      auto* dataset = new dcl_dataset{};
      dataset->agents = std::move(data.agent_data);
      dataset->labels = std::move(data.labels);
      dataset->has_labels = true;
      *data_out = dataset;
    }
    if (truth_out != nullptr) {
      dcl::MixtureModel truth;
      truth.weights = std::move(data.weights);
      truth.means = std::move(data.means);
      truth.precisions = std::move(data.precisions);
      *truth_out = new dcl_model{std::move(truth)};
    }
  });
}

/* ---- mixture models ---- */

void dcl_model_free(dcl_model* model) { delete model; }

int dcl_model_num_agents(const dcl_model* model, int* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "output");
    *out = model->model.num_agents();
  });
}

int dcl_model_num_components(const dcl_model* model, int* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "output");
    *out = model->model.num_components();
  });
}

int dcl_model_dim(const dcl_model* model, int* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "output");
    *out = model->model.dim();
  });
}

int dcl_model_weights(const dcl_model* model, double* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "output");
    export_matrix(model->model.weights, out);
  });
}

int dcl_model_means(const dcl_model* model, double* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "output");
    export_matrix(model->model.means, out);
  });
}

int dcl_model_precision(const dcl_model* model, int k, double* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "output");
    dcl::require(k >= 0 && k < model->model.num_components(),
                 dcl::ErrorCode::invalid_argument,
                 "component index out of range");
    export_matrix(model->model.precisions[k], out);
  });
}

/* ---- joint fitting ---- */

int dcl_fit_options_init(dcl_fit_options* options) {
  return guarded([&] {
    need(options, "options");
    const dcl::FitOptions defaults;
    options->num_components = defaults.num_components;
    options->weight_smoothing = defaults.weight_smoothing;
    options->mean_shrinkage = defaults.mean_shrinkage;
    options->sparsity = defaults.sparsity;
    options->tolerance = defaults.tolerance;
    options->max_rounds = defaults.max_rounds;
    options->glasso_tol = defaults.glasso_tol;
    options->aggregation_method = static_cast<int>(defaults.aggregation);
    dcl_aggregation_options_init(&options->aggregation);
    options->legacy_covariance = defaults.legacy_covariance ? 1 : 0;
    options->seed = defaults.seed;
  });
}

int dcl_fit(const dcl_graph* graph, const dcl_dataset* dataset,
            const dcl_fit_options* options, dcl_model** model_out,
            double* trace_out, int* trace_len, int* rounds, int* converged) {
  return guarded([&] {
    need(graph, "graph");
    need(dataset, "dataset");
    need(model_out, "output");
    dcl::FitOptions converted;
    if (options != nullptr) {
      converted.num_components = options->num_components;
      converted.weight_smoothing = options->weight_smoothing;
      converted.mean_shrinkage = options->mean_shrinkage;
      converted.sparsity = options->sparsity;
      converted.tolerance = options->tolerance;
      converted.max_rounds = options->max_rounds;
      converted.glasso_tol = options->glasso_tol;
      converted.aggregation = convert_method(options->aggregation_method);
      converted.aggregation_options =
          convert_aggregation_options(&options->aggregation);
      converted.legacy_covariance = options->legacy_covariance != 0;
      converted.seed = options->seed;
    }
    dcl::FitResult result =
        dcl::fit_mixture(graph->graph, dataset->agents, converted);
    if (trace_out != nullptr) {
      for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
        trace_out[i] = result.objective_trace[i];
      }
    }
    if (trace_len != nullptr) {
      *trace_len = static_cast<int>(result.objective_trace.size());
    }
    if (rounds != nullptr) *rounds = result.rounds;
    if (converged != nullptr) *converged = result.converged ? 1 : 0;
    *model_out = new dcl_model{std::move(result.model)};
  });
}

int dcl_graphical_lasso(const double* covariance, int dim, double penalty,
                        double tol, long long max_sweeps, double* out) {
  return guarded([&] {
    need(covariance, "covariance");
    need(out, "output");
    dcl::require(dim >= 1, dcl::ErrorCode::invalid_argument,
                 "dimension must be positive");
    const Eigen::MatrixXd input = ConstRowMajorMap(covariance, dim, dim);
    const double used_tol = tol > 0 ? tol : 1e-8;
    const long used_sweeps = max_sweeps > 0 ? static_cast<long>(max_sweeps)
                                            : 10000;
    export_matrix(dcl::graphical_lasso(input, penalty, used_tol, used_sweeps),
                  out);
  });
}

}  // extern "C"
