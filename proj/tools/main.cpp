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

// Command-line front end of the dclearn shared library. Five subcommands
// turn flat key=value config files into CSV/JSON experiment outputs:
//
//   scaling   averaging iteration counts and spectra across graph families
//   privacy   breach probability grids, optionally checked by Monte Carlo
//   aggbench  cost and accuracy of the privacy-preserving sum methods
//   learn     federated mixture fitting from per-agent CSV files
//   synth     labeled synthetic datasets with ground truth
//
// Every run is deterministic in its seed. Exit codes: 0 success, 2 config
// error, 3 convergence or computation failure, 4 I/O error, 5 aggregation
// round failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dclearn.h"
#include "json.hpp"

namespace {

using nlohmann::json;

// ---- failure plumbing ----

struct ConfigError {
  std::string message;
};

struct IoError {
  std::string message;
};

// A dclearn call that should abort the subcommand.
struct StatusError {
  int status;
  std::string message;
};

int exit_code_for_status(int status) {
  switch (status) {
    case DCL_ERR_INVALID_ARGUMENT:
    case DCL_ERR_SIZE_LIMIT:
      return 2;
    case DCL_ERR_IO:
      return 4;
    case DCL_ERR_AGGREGATION:
      return 5;
    default:
      return 3;
  }
}

const char* status_token(int status) {
  switch (status) {
    case DCL_OK:
      return "ok";
    case DCL_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case DCL_ERR_NUMERIC:
      return "numeric";
    case DCL_ERR_NO_CONVERGENCE:
      return "no_convergence";
    case DCL_ERR_SIZE_LIMIT:
      return "size_limit";
    case DCL_ERR_CONSTRUCTION:
      return "construction_failed";
    case DCL_ERR_IO:
      return "io";
    case DCL_ERR_STALLED:
      return "stalled";
    case DCL_ERR_AGGREGATION:
      return "aggregation";
    default:
      return "unknown";
  }
}

// Aborts the subcommand unless the dclearn call succeeded.
void require_ok(int status) {
  if (status != DCL_OK) throw StatusError{status, dcl_last_error_message()};
}

// ---- handle ownership ----

struct GraphDeleter {
  void operator()(dcl_graph* g) const { dcl_graph_free(g); }
};
struct TransitionDeleter {
  void operator()(dcl_transition* t) const { dcl_transition_free(t); }
};
struct DatasetDeleter {
  void operator()(dcl_dataset* d) const { dcl_dataset_free(d); }
};
struct ModelDeleter {
  void operator()(dcl_model* m) const { dcl_model_free(m); }
};

using GraphPtr = std::unique_ptr<dcl_graph, GraphDeleter>;
using TransitionPtr = std::unique_ptr<dcl_transition, TransitionDeleter>;
using DatasetPtr = std::unique_ptr<dcl_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<dcl_model, ModelDeleter>;

// ---- formatting ----

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string fmt_exact(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// ---- config files ----

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string current;
  std::istringstream stream(text);
  while (std::getline(stream, current, ',')) {
    const std::string item = trim(current);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// Flat "key = value" file: '#' comment lines and blank lines are skipped,
// keys may not repeat, and any key no getter asked for is rejected so typos
// cannot silently fall back to defaults.
class Config {
 public:
  static Config load(const std::string& path) {
    std::ifstream input(path);
    if (!input) throw IoError{"cannot open config file '" + path + "'"};
    Config config;
    std::string line;
    int line_number = 0;
    while (std::getline(input, line)) {
      ++line_number;
      const std::string text = trim(line);
      if (text.empty() || text[0] == '#') continue;
      const auto equals = text.find('=');
      if (equals == std::string::npos) {
        throw ConfigError{path + " line " + std::to_string(line_number) +
                          ": expected 'key = value'"};
      }
      const std::string key = trim(text.substr(0, equals));
      const std::string value = trim(text.substr(equals + 1));
      if (key.empty()) {
        throw ConfigError{path + " line " + std::to_string(line_number) +
                          ": empty key"};
      }
      if (!config.file_values_.emplace(key, value).second) {
        throw ConfigError{path + " line " + std::to_string(line_number) +
                          ": duplicate key '" + key + "'"};
      }
    }
    return config;
  }

  std::string get_string(const std::string& key,
                         const std::string& fallback) {
    const std::string value = raw(key, fallback);
    effective_[key] = value;
    return value;
  }

  double get_double(const std::string& key, double fallback) {
    return parse_double(key, raw(key, fmt_exact(fallback)));
  }

  int get_int(const std::string& key, int fallback) {
    const long long value =
        parse_long(key, raw(key, std::to_string(fallback)));
    if (value < std::numeric_limits<int>::min() ||
        value > std::numeric_limits<int>::max()) {
      throw ConfigError{"config key '" + key + "': value out of range"};
    }
    return static_cast<int>(value);
  }

  long long get_long(const std::string& key, long long fallback) {
    return parse_long(key, raw(key, std::to_string(fallback)));
  }

  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) {
    const std::string text = raw(key, std::to_string(fallback));
    try {
      std::size_t used = 0;
      const std::uint64_t value = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing text");
      return value;
    } catch (const std::exception&) {
      throw ConfigError{"config key '" + key + "': not a valid unsigned "
                        "integer: '" + text + "'"};
    }
  }

  bool get_bool(const std::string& key, bool fallback) {
    const std::string text = raw(key, fallback ? "true" : "false");
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError{"config key '" + key +
                      "': expected true/false/1/0, got '" + text + "'"};
  }

  std::vector<int> get_int_list(const std::string& key,
                                const std::string& fallback) {
    std::vector<int> values;
    for (const std::string& item : split_list(raw(key, fallback))) {
      const long long value = parse_long(key, item);
      values.push_back(static_cast<int>(value));
    }
    if (values.empty()) {
      throw ConfigError{"config key '" + key + "': list must not be empty"};
    }
    return values;
  }

  std::vector<double> get_double_list(const std::string& key,
                                      const std::string& fallback) {
    std::vector<double> values;
    for (const std::string& item : split_list(raw(key, fallback))) {
      values.push_back(parse_double(key, item));
    }
    if (values.empty()) {
      throw ConfigError{"config key '" + key + "': list must not be empty"};
    }
    return values;
  }

  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::string& fallback) {
    const std::vector<std::string> values = split_list(raw(key, fallback));
    if (values.empty()) {
      throw ConfigError{"config key '" + key + "': list must not be empty"};
    }
    return values;
  }

  // Requires the key to appear in the file.
  std::vector<std::string> get_required_string_list(const std::string& key) {
    if (file_values_.find(key) == file_values_.end()) {
      throw ConfigError{"missing required config key '" + key + "'"};
    }
    return get_string_list(key, "");
  }

  // Replaces (or inserts) a raw value as if the file had contained it; used
  // for command-line overrides.
  void force_value(const std::string& key, const std::string& value) {
    file_values_[key] = value;
  }

  // Rejects config keys that no getter consumed.
  void finish() const {
    for (const auto& [key, value] : file_values_) {
      if (consumed_.find(key) == consumed_.end()) {
        throw ConfigError{"unknown config key '" + key + "'"};
      }
    }
  }

  const std::map<std::string, std::string>& effective() const {
    return effective_;
  }

 private:
  std::string raw(const std::string& key, const std::string& fallback) {
    consumed_.insert(key);
    const auto it = file_values_.find(key);
    const std::string value = it == file_values_.end() ? fallback : it->second;
    effective_[key] = value;
    return value;
  }

  double parse_double(const std::string& key, const std::string& text) {
    try {
      std::size_t used = 0;
      const double value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing text");
      return value;
    } catch (const std::exception&) {
      throw ConfigError{"config key '" + key + "': not a number: '" + text +
                        "'"};
    }
  }

  long long parse_long(const std::string& key, const std::string& text) {
    try {
      std::size_t used = 0;
      const long long value = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing text");
      return value;
    } catch (const std::exception&) {
      throw ConfigError{"config key '" + key + "': not an integer: '" + text +
                        "'"};
    }
  }

  std::map<std::string, std::string> file_values_;
  std::set<std::string> consumed_;
  std::map<std::string, std::string> effective_;
};

// ---- output files ----

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
  const std::filesystem::path path(out_dir);
  std::error_code error;
  std::filesystem::create_directories(path, error);
  if (error) {
    throw IoError{"cannot create output directory '" + out_dir +
                  "': " + error.message()};
  }
  return path;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream output(path);
  if (!output) throw IoError{"cannot open output file '" + path.string() + "'"};
  return output;
}

void write_config_header(std::ofstream& output, const std::string& subcommand,
                         const Config& config) {
  output << "# dclearn " << subcommand << "\n";
  for (const auto& [key, value] : config.effective()) {
    output << "# " << key << " = " << value << "\n";
  }
}

json config_as_json(const Config& config) {
  json object = json::object();
  for (const auto& [key, value] : config.effective()) object[key] = value;
  return object;
}

void announce(const std::filesystem::path& path) {
  std::cout << "wrote " << path.string() << "\n";
}

// ---- shared building blocks ----

int build_graph(const std::string& type, int size, int degree,
                std::uint64_t seed, GraphPtr* out) {
  dcl_graph* graph = nullptr;
  int status = DCL_OK;
  if (type == "ring") {
    status = dcl_graph_ring(size, &graph);
  } else if (type == "complete") {
    status = dcl_graph_complete(size, &graph);
  } else if (type == "expander") {
    status = dcl_graph_inverse_expander(size, 0, &graph);
  } else if (type == "random_regular") {
    status = dcl_graph_random_regular(size, degree, seed, &graph);
  } else {
    throw ConfigError{"unknown graph type '" + type +
                      "' (expected ring, complete, expander, or "
                      "random_regular)"};
  }
  if (status == DCL_OK) out->reset(graph);
  return status;
}

int parse_method(const std::string& name) {
  if (name == "direct") return DCL_AGGREGATE_DIRECT;
  if (name == "consensus") return DCL_AGGREGATE_CONSENSUS;
  if (name == "shamir") return DCL_AGGREGATE_SHAMIR;
  if (name == "chunked") return DCL_AGGREGATE_CHUNKED;
  throw ConfigError{"unknown aggregation method '" + name +
                    "' (expected direct, consensus, shamir, or chunked)"};
}

std::vector<double> uniform_values(std::uint64_t seed, int n, double low,
                                   double high) {
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  require_ok(dcl_random_uniform(seed, n, low, high, values.data()));
  return values;
}

json matrix_as_json(const std::vector<double>& buffer, int rows, int cols) {
  json matrix = json::array();
  for (int i = 0; i < rows; ++i) {
    json row = json::array();
    for (int j = 0; j < cols; ++j) {
      row.push_back(buffer[static_cast<std::size_t>(i) * cols + j]);
    }
    matrix.push_back(row);
  }
  return matrix;
}

json model_as_json(const dcl_model* model) {
  int num_agents = 0;
  int num_components = 0;
  int dim = 0;
  require_ok(dcl_model_num_agents(model, &num_agents));
  require_ok(dcl_model_num_components(model, &num_components));
  require_ok(dcl_model_dim(model, &dim));

  std::vector<double> weights(
      static_cast<std::size_t>(num_agents) * num_components, 0.0);
  require_ok(dcl_model_weights(model, weights.data()));
  std::vector<double> means(static_cast<std::size_t>(num_components) * dim,
                            0.0);
  require_ok(dcl_model_means(model, means.data()));

  json precisions = json::array();
  std::vector<double> precision(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int k = 0; k < num_components; ++k) {
    require_ok(dcl_model_precision(model, k, precision.data()));
    precisions.push_back(matrix_as_json(precision, dim, dim));
  }

  json object;
  object["num_agents"] = num_agents;
  object["num_components"] = num_components;
  object["dim"] = dim;
  object["weights"] = matrix_as_json(weights, num_agents, num_components);
  object["means"] = matrix_as_json(means, num_components, dim);
  object["precisions"] = precisions;
  return object;
}

// ---- subcommands ----

int cmd_scaling(Config& config, const std::string& out_dir) {
  const std::vector<std::string> graphs =
      config.get_string_list("graphs", "ring,expander");
  const std::vector<int> s_values =
      config.get_int_list("s_values", "7,13,31,63,127,199");
  const double delta = config.get_double("delta", 1e-3);
  const double epsilon = config.get_double("epsilon", 0.0);
  const long long max_iterations =
      config.get_long("max_iterations", 1000000);
  const double init_low = config.get_double("init_low", -1.0);
  const double init_high = config.get_double("init_high", 2.0);
  const int degree = config.get_int("degree", 3);
  const std::uint64_t seed = config.get_uint64("seed", 0);
  config.finish();

  if (delta <= 0) throw ConfigError{"delta must be positive"};
  if (init_low >= init_high) {
    throw ConfigError{"init_low must be below init_high"};
  }
  for (const int s : s_values) {
    if (s < 3 || s > 499) {
      throw ConfigError{"s_values entries must lie in [3, 499], got " +
                        std::to_string(s)};
    }
  }

  const std::filesystem::path dir = prepare_out_dir(out_dir);
  const std::filesystem::path csv_path = dir / "scaling.csv";
  std::ofstream csv = open_output(csv_path);
  write_config_header(csv, "scaling", config);
  csv << "graph_type,S,eps,delta,lambda2,predicted_t,measured_t,status\n";

  for (const std::string& graph_type : graphs) {
    for (const int s : s_values) {
      double eps_used = std::nan("");
      double lambda2 = std::nan("");
      long long predicted = -1;
      long long measured = -1;
      const char* status = "ok";

      GraphPtr graph;
      int call = build_graph(graph_type, s, degree, seed, &graph);
      TransitionPtr transition;
      if (call == DCL_OK) {
        dcl_transition* raw = nullptr;
        call = dcl_transition_create(graph.get(), epsilon, &raw);
        if (call == DCL_OK) transition.reset(raw);
      }
      double gap = 0.0;
      if (call == DCL_OK) {
        call = dcl_transition_epsilon(transition.get(), &eps_used);
      }
      if (call == DCL_OK) {
        call = dcl_transition_spectrum(transition.get(), 0, &lambda2, &gap);
      }
      if (call == DCL_OK) {
        call = dcl_estimate_iterations(s, delta, gap, &predicted);
      }
      if (call == DCL_OK) {
        // The same per-S start vector for every graph family, so measured
        // counts compare like for like.
        std::vector<double> start(static_cast<std::size_t>(s), 0.0);
        call = dcl_random_uniform(seed + static_cast<std::uint64_t>(s), s,
                                  init_low, init_high, start.data());
        if (call == DCL_OK) {
          call = dcl_consensus_iterations_to_error(
              transition.get(), start.data(), s, delta, max_iterations,
              &measured);
        }
      }
      if (call != DCL_OK) {
        status = status_token(call);
      } else if (measured < 0) {
        status = status_token(DCL_ERR_NO_CONVERGENCE);
      }

      csv << graph_type << ',' << s << ',' << fmt(eps_used) << ','
          << fmt(delta) << ',' << fmt(lambda2) << ',' << predicted << ','
          << measured << ',' << status << '\n';
    }
  }
  csv.close();
  if (!csv) throw IoError{"failed writing '" + csv_path.string() + "'"};
  announce(csv_path);
  return 0;
}

int cmd_privacy(Config& config, const std::string& out_dir) {
  const int size = config.get_int("size", 100);
  const int degree = config.get_int("degree", 3);
  const int chunks_max = config.get_int("chunks_max", 20);
  const int colluders_max = config.get_int("colluders_max", 99);
  const std::vector<double> eaves_fracs = config.get_double_list(
      "eaves_fracs", "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5");
  const long long mc_trials = config.get_long("mc_trials", 0);
  const std::uint64_t seed = config.get_uint64("seed", 0);
  config.finish();

  if (size < 2) throw ConfigError{"size must be at least 2"};
  if (degree < 1 || degree > size - 1) {
    throw ConfigError{"degree must lie in [1, size - 1]"};
  }
  if (chunks_max < 1) throw ConfigError{"chunks_max must be at least 1"};
  if (colluders_max < 1 || colluders_max > size - 1) {
    throw ConfigError{"colluders_max must lie in [1, size - 1]"};
  }
  for (const double frac : eaves_fracs) {
    if (!(frac > 0.0) || frac > 1.0) {
      throw ConfigError{"eaves_fracs entries must lie in (0, 1]"};
    }
  }
  if (mc_trials < 0) throw ConfigError{"mc_trials must be nonnegative"};

  const long long total_slots =
      static_cast<long long>(size) * static_cast<long long>(degree);

  const std::filesystem::path dir = prepare_out_dir(out_dir);
  const std::filesystem::path csv_path = dir / "privacy.csv";
  std::ofstream csv = open_output(csv_path);
  write_config_header(csv, "privacy", config);
  csv << "scenario,size,degree,total_slots,num_chunks,num_colluders,"
         "num_tapped,exact,bound\n";

  // Inapplicable adversary columns carry -1.
  for (int chunks = 1; chunks <= chunks_max; ++chunks) {
    for (int colluders = 1; colluders <= colluders_max; ++colluders) {
      double exact = 0.0;
      double bound = 0.0;
      require_ok(dcl_collusion_breach_exact(size, degree, colluders, chunks,
                                            &exact));
      require_ok(dcl_collusion_breach_bound(size, degree, colluders, chunks,
                                            &bound));
      csv << "collusion," << size << ',' << degree << ',' << total_slots
          << ',' << chunks << ',' << colluders << ",-1," << fmt(exact) << ','
          << fmt(bound) << '\n';
    }
  }
  std::vector<long long> tapped_counts;
  for (const double frac : eaves_fracs) {
    long long tapped = std::llround(frac * static_cast<double>(total_slots));
    tapped = std::max<long long>(0, std::min(tapped, total_slots));
    tapped_counts.push_back(tapped);
  }
  for (int chunks = 1; chunks <= chunks_max; ++chunks) {
    for (const long long tapped : tapped_counts) {
      double exact = 0.0;
      double bound = 0.0;
      require_ok(dcl_eavesdrop_breach_exact(total_slots, degree, tapped,
                                            chunks, &exact));
      require_ok(dcl_eavesdrop_breach_bound(total_slots, degree, tapped,
                                            chunks, &bound));
      csv << "eavesdrop," << size << ',' << degree << ',' << total_slots
          << ',' << chunks << ",-1," << tapped << ',' << fmt(exact) << ','
          << fmt(bound) << '\n';
    }
  }
  csv.close();
  if (!csv) throw IoError{"failed writing '" + csv_path.string() + "'"};
  announce(csv_path);

  if (mc_trials > 0) {
    // Spot-check the closed forms on the grid corners with small chunk
    // counts, where the simulation can still resolve the probability.
    std::vector<int> mc_chunks;
    for (const int c : {1, 2, 3}) {
      if (c <= chunks_max) mc_chunks.push_back(c);
    }
    std::vector<int> mc_colluders = {1};
    if (colluders_max != 1) mc_colluders.push_back(colluders_max);
    std::vector<long long> mc_tapped = {tapped_counts.front()};
    if (tapped_counts.back() != tapped_counts.front()) {
      mc_tapped.push_back(tapped_counts.back());
    }

    std::uint64_t counter = 0;
    json collusion_entries = json::array();
    for (const int chunks : mc_chunks) {
      for (const int colluders : mc_colluders) {
        double exact = 0.0;
        require_ok(dcl_collusion_breach_exact(size, degree, colluders, chunks,
                                              &exact));
        dcl_breach_estimate estimate{};
        require_ok(dcl_estimate_breach_collusion(
            size, degree, colluders, chunks, mc_trials,
            seed + 1000003ULL * counter++, &estimate));
        json entry;
        entry["num_chunks"] = chunks;
        entry["num_colluders"] = colluders;
        entry["exact"] = exact;
        entry["estimate"] = estimate.probability;
        entry["ci_low"] = estimate.ci_low;
        entry["ci_high"] = estimate.ci_high;
        entry["trials"] = estimate.trials;
        entry["hits"] = estimate.hits;
        collusion_entries.push_back(entry);
      }
    }
    json eavesdrop_entries = json::array();
    for (const int chunks : mc_chunks) {
      for (const long long tapped : mc_tapped) {
        double exact = 0.0;
        require_ok(dcl_eavesdrop_breach_exact(total_slots, degree, tapped,
                                              chunks, &exact));
        dcl_breach_estimate estimate{};
        require_ok(dcl_estimate_breach_eavesdrop(
            total_slots, degree, tapped, chunks, mc_trials,
            seed + 1000003ULL * counter++, &estimate));
        json entry;
        entry["num_chunks"] = chunks;
        entry["num_tapped"] = tapped;
        entry["exact"] = exact;
        entry["estimate"] = estimate.probability;
        entry["ci_low"] = estimate.ci_low;
        entry["ci_high"] = estimate.ci_high;
        entry["trials"] = estimate.trials;
        entry["hits"] = estimate.hits;
        eavesdrop_entries.push_back(entry);
      }
    }

    json mc;
    mc["config"] = config_as_json(config);
    mc["collusion"] = collusion_entries;
    mc["eavesdrop"] = eavesdrop_entries;
    const std::filesystem::path mc_path = dir / "privacy_mc.json";
    std::ofstream mc_file = open_output(mc_path);
    mc_file << mc.dump(2) << "\n";
    mc_file.close();
    if (!mc_file) throw IoError{"failed writing '" + mc_path.string() + "'"};
    announce(mc_path);
  }
  return 0;
}

int cmd_aggbench(Config& config, const std::string& out_dir) {
  const std::vector<std::string> method_names = config.get_string_list(
      "methods", "direct,consensus,shamir,chunked");
  const std::vector<int> s_values =
      config.get_int_list("s_values", "7,13,31");
  const std::string graph_type = config.get_string("graph", "expander");
  const int degree = config.get_int("degree", 3);
  const int num_chunks = config.get_int("num_chunks", 3);
  const double tolerance = config.get_double("tolerance", 1e-6);
  const double epsilon = config.get_double("epsilon", 0.0);
  const long long max_iterations =
      config.get_long("max_iterations", 1000000);
  const double coefficient_range =
      config.get_double("coefficient_range", -1.0);
  const double chunk_range = config.get_double("chunk_range", -1.0);
  const bool permute = config.get_bool("permute", true);
  const double init_low = config.get_double("init_low", 0.5);
  const double init_high = config.get_double("init_high", 2.0);
  const std::uint64_t seed = config.get_uint64("seed", 0);
  config.finish();

  std::vector<int> methods;
  for (const std::string& name : method_names) {
    methods.push_back(parse_method(name));
  }
  if (init_low >= init_high) {
    throw ConfigError{"init_low must be below init_high"};
  }

  dcl_aggregation_options options{};
  require_ok(dcl_aggregation_options_init(&options));
  options.epsilon = epsilon;
  options.tolerance = tolerance;
  options.max_iterations = max_iterations;
  options.num_chunks = num_chunks;
  options.coefficient_range = coefficient_range;
  options.chunk_range = chunk_range;
  options.permute = permute ? 1 : 0;

  const std::filesystem::path dir = prepare_out_dir(out_dir);
  const std::filesystem::path csv_path = dir / "aggbench.csv";
  std::ofstream csv = open_output(csv_path);
  write_config_header(csv, "aggbench", config);
  csv << "method,S,N_C,tol,rounds,total_iterations,scalar_messages,"
         "abs_error,status\n";

  for (const int s : s_values) {
    GraphPtr graph;
    int graph_status = build_graph(graph_type, s, degree, seed, &graph);
    std::vector<double> values;
    double exact_sum = 0.0;
    if (graph_status == DCL_OK) {
      values = uniform_values(seed + static_cast<std::uint64_t>(s), s,
                              init_low, init_high);
      // The reference total every method is judged against.
      dcl_aggregation_result direct{};
      graph_status =
          dcl_aggregate(graph.get(), DCL_AGGREGATE_DIRECT, values.data(), s,
                        seed + static_cast<std::uint64_t>(s), &options,
                        &direct);
      exact_sum = direct.value;
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      dcl_aggregation_result result{};
      int call = graph_status;
      if (call == DCL_OK) {
        call = dcl_aggregate(graph.get(), methods[m], values.data(), s,
                             seed + static_cast<std::uint64_t>(s), &options,
                             &result);
      }
      const double abs_error =
          call == DCL_OK ? std::fabs(result.value - exact_sum) : std::nan("");
      csv << method_names[m] << ',' << s << ',' << num_chunks << ','
          << fmt(tolerance) << ',' << result.rounds << ','
          << result.total_iterations << ',' << result.scalar_messages << ','
          << fmt(abs_error) << ',' << status_token(call) << '\n';
    }
  }
  csv.close();
  if (!csv) throw IoError{"failed writing '" + csv_path.string() + "'"};
  announce(csv_path);
  return 0;
}

int cmd_learn(Config& config, const std::string& out_dir) {
  const std::vector<std::string> data_paths =
      config.get_required_string_list("data");
  const std::string graph_type = config.get_string("graph", "complete");
  const int degree = config.get_int("degree", 3);

  dcl_fit_options options{};
  require_ok(dcl_fit_options_init(&options));
  options.num_components = config.get_int("num_components", 2);
  options.weight_smoothing = config.get_double("weight_smoothing", 1.0);
  options.mean_shrinkage = config.get_double("mean_shrinkage", 1e-3);
  options.sparsity = config.get_double("sparsity", 0.1);
  options.tolerance = config.get_double("tolerance", 1e-6);
  options.max_rounds = config.get_int("max_rounds", 200);
  options.glasso_tol = config.get_double("glasso_tol", 1e-8);
  options.aggregation_method =
      parse_method(config.get_string("aggregation", "direct"));
  options.aggregation.epsilon = config.get_double("epsilon", 0.0);
  options.aggregation.tolerance = config.get_double("agg_tolerance", 1e-6);
  options.aggregation.max_iterations =
      config.get_long("agg_max_iterations", 1000000);
  options.aggregation.num_chunks = config.get_int("num_chunks", 3);
  options.aggregation.coefficient_range =
      config.get_double("coefficient_range", -1.0);
  options.aggregation.chunk_range = config.get_double("chunk_range", -1.0);
  options.aggregation.permute = config.get_bool("permute", true) ? 1 : 0;
  options.legacy_covariance =
      config.get_bool("legacy_covariance", false) ? 1 : 0;
  options.seed = config.get_uint64("seed", 0);
  config.finish();

  if (options.max_rounds < 1) throw ConfigError{"max_rounds must be positive"};

  DatasetPtr dataset;
  {
    dcl_dataset* raw = nullptr;
    require_ok(dcl_dataset_create(&raw));
    dataset.reset(raw);
  }
  for (const std::string& path : data_paths) {
    require_ok(dcl_dataset_add_csv(dataset.get(), path.c_str()));
  }
  int num_agents = 0;
  require_ok(dcl_dataset_num_agents(dataset.get(), &num_agents));

  GraphPtr graph;
  require_ok(build_graph(graph_type, num_agents, degree, options.seed,
                         &graph));

  ModelPtr model;
  std::vector<double> trace(static_cast<std::size_t>(options.max_rounds),
                            0.0);
  int trace_len = 0;
  int rounds = 0;
  int converged = 0;
  {
    dcl_model* raw = nullptr;
    require_ok(dcl_fit(graph.get(), dataset.get(), &options, &raw,
                       trace.data(), &trace_len, &rounds, &converged));
    model.reset(raw);
  }

  const std::filesystem::path dir = prepare_out_dir(out_dir);
  const std::filesystem::path trace_path = dir / "trace.csv";
  std::ofstream trace_csv = open_output(trace_path);
  write_config_header(trace_csv, "learn", config);
  trace_csv << "round,objective\n";
  for (int i = 0; i < trace_len; ++i) {
    trace_csv << (i + 1) << ',' << fmt(trace[static_cast<std::size_t>(i)])
              << '\n';
  }
  trace_csv.close();
  if (!trace_csv) throw IoError{"failed writing '" + trace_path.string() + "'"};
  announce(trace_path);

  json output = model_as_json(model.get());
  output["config"] = config_as_json(config);
  output["rounds"] = rounds;
  output["converged"] = converged != 0;
  if (trace_len > 0) {
    output["final_objective"] = trace[static_cast<std::size_t>(trace_len - 1)];
  }
  const std::filesystem::path model_path = dir / "model.json";
  std::ofstream model_file = open_output(model_path);
  model_file << output.dump(2) << "\n";
  model_file.close();
  if (!model_file) {
    throw IoError{"failed writing '" + model_path.string() + "'"};
  }
  announce(model_path);

  if (converged != 0) {
    std::cout << "converged after " << rounds << " rounds\n";
    return 0;
  }
  std::cout << "stopped after " << rounds << " rounds without converging\n";
  return 3;
}

int cmd_synth(Config& config, const std::string& out_dir) {
  dcl_synth_options options{};
  require_ok(dcl_synth_options_init(&options));
  options.num_agents = config.get_int("num_agents", options.num_agents);
  options.num_components =
      config.get_int("num_components", options.num_components);
  options.dim = config.get_int("dim", options.dim);
  options.samples_per_agent =
      config.get_int("samples_per_agent", options.samples_per_agent);
  options.skew = config.get_double("skew", options.skew);
  options.separation = config.get_double("separation", options.separation);
  options.precision_density =
      config.get_double("precision_density", options.precision_density);
  options.seed = config.get_uint64("seed", options.seed);
  config.finish();

  DatasetPtr dataset;
  ModelPtr truth;
  {
    dcl_dataset* raw_data = nullptr;
    dcl_model* raw_truth = nullptr;
    require_ok(dcl_synth_generate(&options, &raw_data, &raw_truth));
    dataset.reset(raw_data);
    truth.reset(raw_truth);
  }

  const std::filesystem::path dir = prepare_out_dir(out_dir);
  const int rows = options.samples_per_agent;
  const int cols = options.dim;
  std::vector<double> buffer(static_cast<std::size_t>(rows) * cols, 0.0);
  for (int a = 0; a < options.num_agents; ++a) {
    require_ok(dcl_dataset_get(dataset.get(), a, buffer.data()));
    const std::filesystem::path agent_path =
        dir / ("agent_" + std::to_string(a) + ".csv");
    std::ofstream agent_csv = open_output(agent_path);
    write_config_header(agent_csv, "synth", config);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        if (j > 0) agent_csv << ',';
        agent_csv << fmt_exact(buffer[static_cast<std::size_t>(i) * cols + j]);
      }
      agent_csv << '\n';
    }
    agent_csv.close();
    if (!agent_csv) {
      throw IoError{"failed writing '" + agent_path.string() + "'"};
    }
    announce(agent_path);
  }

  json truth_json = model_as_json(truth.get());
  truth_json["config"] = config_as_json(config);
  json labels = json::array();
  std::vector<int> agent_labels(static_cast<std::size_t>(rows), 0);
  for (int a = 0; a < options.num_agents; ++a) {
    require_ok(dcl_dataset_labels(dataset.get(), a, agent_labels.data()));
    labels.push_back(json(agent_labels));
  }
  truth_json["labels"] = labels;
  const std::filesystem::path truth_path = dir / "ground_truth.json";
  std::ofstream truth_file = open_output(truth_path);
  truth_file << truth_json.dump(2) << "\n";
  truth_file.close();
  if (!truth_file) {
    throw IoError{"failed writing '" + truth_path.string() + "'"};
  }
  announce(truth_path);
  return 0;
}

// ---- dispatch ----

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;
};

int dispatch(const std::string& name, const CommonArgs& args) {
  try {
    Config config = Config::load(args.config_path);
    if (args.seed_option != nullptr && args.seed_option->count() > 0) {
      config.force_value("seed", std::to_string(args.seed));
    }
    if (name == "scaling") return cmd_scaling(config, args.out_dir);
    if (name == "privacy") return cmd_privacy(config, args.out_dir);
    if (name == "aggbench") return cmd_aggbench(config, args.out_dir);
    if (name == "learn") return cmd_learn(config, args.out_dir);
    if (name == "synth") return cmd_synth(config, args.out_dir);
    std::cerr << "error: unknown subcommand '" << name << "'\n";
    return 2;
  } catch (const ConfigError& error) {
    std::cerr << "error: " << error.message << "\n";
    return 2;
  } catch (const IoError& error) {
    std::cerr << "error: " << error.message << "\n";
    return 4;
  } catch (const StatusError& error) {
    std::cerr << "error: " << error.message << "\n";
    return exit_code_for_status(error.status);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decentralized collaborative learning experiments"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"scaling", "averaging iteration counts across graph families"},
      {"privacy", "breach probability grids and Monte Carlo checks"},
      {"aggbench", "cost and accuracy of the aggregation methods"},
      {"learn", "federated mixture fitting from per-agent CSV files"},
      {"synth", "labeled synthetic datasets with ground truth"},
  };

  std::map<std::string, CommonArgs> args;
  for (const auto& [name, description] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    CommonArgs& common = args[name];
    sub->add_option("--config", common.config_path,
                    "key = value configuration file")
        ->required();
    sub->add_option("--out", common.out_dir, "output directory");
    common.seed_option =
        sub->add_option("--seed", common.seed, "override the config seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  for (const auto& [name, description] : subcommands) {
    if (app.got_subcommand(name)) return dispatch(name, args[name]);
  }
  std::cerr << "error: no subcommand given\n";
  return 2;
}
