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

// End-to-end checks of the command-line tool: exit codes, output schemas,
// and byte-level determinism, driven through the real binary.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* cli_path() { return DCLEARN_CLI_PATH; }

// Scratch directory shared by the whole suite; wiped on first use.
const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path path = fs::current_path() / "cli_test_out";
    fs::remove_all(path);
    fs::create_directories(path);
    return path;
  }();
  return dir;
}

int run_cli(const std::string& arguments) {
  const std::string command =
      std::string(cli_path()) + " " + arguments + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream output(path);
  REQUIRE(output.is_open());
  output << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream input(path);
  REQUIRE(input.is_open());
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return buffer.str();
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

Csv read_csv(const fs::path& path) {
  std::ifstream input(path);
  REQUIRE(input.is_open());
  Csv csv;
  std::string line;
  bool header_seen = false;
  while (std::getline(input, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.comments.push_back(line);
      continue;
    }
    if (!header_seen) {
      csv.header = split_commas(line);
      header_seen = true;
      continue;
    }
    csv.rows.push_back(split_commas(line));
  }
  return csv;
}

json read_json(const fs::path& path) { return json::parse(read_file(path)); }

int column(const Csv& csv, const std::string& name) {
  for (std::size_t i = 0; i < csv.header.size(); ++i) {
    if (csv.header[i] == name) return static_cast<int>(i);
  }
  REQUIRE_MESSAGE(false, "missing column " << name);
  return -1;
}

}  // namespace

TEST_CASE("scaling writes the documented schema and tolerates no failures") {
  const fs::path dir = work_dir() / "scaling";
  fs::create_directories(dir);
  const fs::path config = dir / "config.cfg";
  write_file(config,
             "graphs = ring,expander,complete\n"
             "s_values = 7,12,31\n"
             "delta = 1e-3\n"
             "seed = 11\n");
  const int exit_code = run_cli("scaling --config " + config.string() +
                                " --out " + dir.string());
  CHECK(exit_code == 0);

  const Csv csv = read_csv(dir / "scaling.csv");
  REQUIRE(csv.comments.size() > 1);
  CHECK(csv.comments.front() == "# dclearn scaling");
  bool echoes_seed = false;
  for (const std::string& comment : csv.comments) {
    echoes_seed |= comment == "# seed = 11";
  }
  CHECK(echoes_seed);

  REQUIRE(csv.header ==
          std::vector<std::string>{"graph_type", "S", "eps", "delta",
                                   "lambda2", "predicted_t", "measured_t",
                                   "status"});
  REQUIRE(csv.rows.size() == 9);
  const int status = column(csv, "status");
  const int measured = column(csv, "measured_t");
  const int predicted = column(csv, "predicted_t");
  const int lambda2 = column(csv, "lambda2");
  for (const auto& row : csv.rows) {
    CAPTURE(row[0]);
    CAPTURE(row[1]);
    CHECK(row[status] == "ok");
    CHECK(std::stol(row[measured]) >= 1);
    CHECK(std::stol(row[predicted]) >= 1);
    CHECK(std::stod(row[lambda2]) > 0.0);
    CHECK(std::stod(row[lambda2]) < 1.0);
  }
  // A fully connected graph at the default step settles in one iteration.
  for (const auto& row : csv.rows) {
    if (row[0] == "complete") CHECK(std::stol(row[measured]) == 1);
  }
}

TEST_CASE("scaling output is deterministic in the seed") {
  const fs::path dir = work_dir() / "determinism";
  fs::create_directories(dir);
  const fs::path config = dir / "config.cfg";
  write_file(config, "s_values = 7,13\nseed = 3\n");

  REQUIRE(run_cli("scaling --config " + config.string() + " --out " +
                  (dir / "a").string()) == 0);
  REQUIRE(run_cli("scaling --config " + config.string() + " --out " +
                  (dir / "b").string()) == 0);
  CHECK(read_file(dir / "a" / "scaling.csv") ==
        read_file(dir / "b" / "scaling.csv"));

  // The command-line override replaces the config seed.
  REQUIRE(run_cli("scaling --config " + config.string() + " --seed 3 --out " +
                  (dir / "c").string()) == 0);
  CHECK(read_file(dir / "a" / "scaling.csv") ==
        read_file(dir / "c" / "scaling.csv"));

  REQUIRE(run_cli("scaling --config " + config.string() + " --seed 4 --out " +
                  (dir / "d").string()) == 0);
  CHECK(read_file(dir / "a" / "scaling.csv") !=
        read_file(dir / "d" / "scaling.csv"));
}

TEST_CASE("privacy grid dominates exact by bound in every row") {
  const fs::path dir = work_dir() / "privacy";
  fs::create_directories(dir);
  const fs::path config = dir / "config.cfg";
  write_file(config,
             "size = 30\n"
             "degree = 3\n"
             "chunks_max = 5\n"
             "colluders_max = 29\n"
             "eaves_fracs = 0.1,0.3,0.5\n"
             "mc_trials = 5000\n"
             "seed = 2\n");
  REQUIRE(run_cli("privacy --config " + config.string() + " --out " +
                  dir.string()) == 0);

  const Csv csv = read_csv(dir / "privacy.csv");
  REQUIRE(csv.header ==
          std::vector<std::string>{"scenario", "size", "degree", "total_slots",
                                   "num_chunks", "num_colluders", "num_tapped",
                                   "exact", "bound"});
  // 5 chunk counts x (29 collusion sizes + 3 tap fractions).
  REQUIRE(csv.rows.size() == 5 * 29 + 5 * 3);
  const int exact_col = column(csv, "exact");
  const int bound_col = column(csv, "bound");
  int collusion_rows = 0;
  for (const auto& row : csv.rows) {
    const double exact = std::stod(row[exact_col]);
    const double bound = std::stod(row[bound_col]);
    CHECK(exact >= 0.0);
    CHECK(exact <= 1.0);
    CHECK(bound >= exact - 1e-15);
    collusion_rows += row[0] == "collusion" ? 1 : 0;
  }
  CHECK(collusion_rows == 5 * 29);

  const json mc = read_json(dir / "privacy_mc.json");
  REQUIRE(mc.contains("collusion"));
  REQUIRE(mc.contains("eavesdrop"));
  REQUIRE(mc["collusion"].size() > 0);
  for (const auto& entry : mc["collusion"]) {
    CHECK(entry["trials"].get<long long>() == 5000);
    const double estimate = entry["estimate"].get<double>();
    CHECK(entry["ci_low"].get<double>() <= estimate);
    CHECK(estimate <= entry["ci_high"].get<double>());
  }
}

TEST_CASE("aggbench reports costs and near-exact sums per method") {
  const fs::path dir = work_dir() / "aggbench";
  fs::create_directories(dir);
  const fs::path config = dir / "config.cfg";
  write_file(config,
             "s_values = 7,13\n"
             "tolerance = 1e-8\n"
             "seed = 6\n");
  REQUIRE(run_cli("aggbench --config " + config.string() + " --out " +
                  dir.string()) == 0);

  const Csv csv = read_csv(dir / "aggbench.csv");
  REQUIRE(csv.header == std::vector<std::string>{
                            "method", "S", "N_C", "tol", "rounds",
                            "total_iterations", "scalar_messages", "abs_error",
                            "status"});
  REQUIRE(csv.rows.size() == 8);
  const int status = column(csv, "status");
  const int abs_error = column(csv, "abs_error");
  const int messages = column(csv, "scalar_messages");
  std::map<std::string, long> messages_at_13;
  for (const auto& row : csv.rows) {
    CAPTURE(row[0]);
    CHECK(row[status] == "ok");
    const double error = std::stod(row[abs_error]);
    if (row[0] == "direct") {
      CHECK(error == 0.0);
      CHECK(std::stol(row[messages]) == 0);
    } else {
      CHECK(error < 1e-4);
      CHECK(std::stol(row[messages]) > 0);
    }
    if (row[1] == "13") messages_at_13[row[0]] = std::stol(row[messages]);
  }
  // Sharing with one round per agent costs more transmissions than three
  // rounds of chunking.
  CHECK(messages_at_13["shamir"] > messages_at_13["chunked"]);
}

TEST_CASE("synth then learn round-trips through files and converges") {
  const fs::path dir = work_dir() / "pipeline";
  fs::create_directories(dir);
  const fs::path synth_config = dir / "synth.cfg";
  write_file(synth_config,
             "num_agents = 3\n"
             "num_components = 2\n"
             "dim = 2\n"
             "samples_per_agent = 80\n"
             "seed = 17\n");
  const fs::path synth_out = dir / "data";
  REQUIRE(run_cli("synth --config " + synth_config.string() + " --out " +
                  synth_out.string()) == 0);

  for (int a = 0; a < 3; ++a) {
    const fs::path agent = synth_out / ("agent_" + std::to_string(a) + ".csv");
    REQUIRE(fs::exists(agent));
    const Csv csv = read_csv(agent);
    CHECK(csv.comments.front() == "# dclearn synth");
    // No separate header row: every non-comment line is data.
    REQUIRE(csv.header.size() == 2);
    CHECK(csv.rows.size() == 79);
  }
  const json truth = read_json(synth_out / "ground_truth.json");
  REQUIRE(truth["num_agents"].get<int>() == 3);
  REQUIRE(truth["labels"].size() == 3);
  REQUIRE(truth["labels"][0].size() == 80);
  REQUIRE(truth["weights"].size() == 3);
  for (const auto& row : truth["weights"]) {
    double total = 0.0;
    for (const auto& value : row) total += value.get<double>();
    CHECK(std::abs(total - 1.0) < 1e-12);
  }

  // Same seed, same bytes.
  const fs::path synth_again = dir / "data_again";
  REQUIRE(run_cli("synth --config " + synth_config.string() + " --out " +
                  synth_again.string()) == 0);
  CHECK(read_file(synth_out / "agent_2.csv") ==
        read_file(synth_again / "agent_2.csv"));

  const fs::path learn_config = dir / "learn.cfg";
  write_file(learn_config,
             "data = " + (synth_out / "agent_0.csv").string() + "," +
                 (synth_out / "agent_1.csv").string() + "," +
                 (synth_out / "agent_2.csv").string() +
                 "\n"
                 "num_components = 2\n"
                 "max_rounds = 80\n"
                 "seed = 5\n");
  const fs::path learn_out = dir / "fit";
  REQUIRE(run_cli("learn --config " + learn_config.string() + " --out " +
                  learn_out.string()) == 0);

  const json model = read_json(learn_out / "model.json");
  CHECK(model["converged"].get<bool>());
  CHECK(model["rounds"].get<int>() >= 1);
  REQUIRE(model["num_agents"].get<int>() == 3);
  REQUIRE(model["num_components"].get<int>() == 2);
  REQUIRE(model["dim"].get<int>() == 2);
  REQUIRE(model["precisions"].size() == 2);
  for (const auto& row : model["weights"]) {
    double total = 0.0;
    for (const auto& value : row) total += value.get<double>();
    CHECK(std::abs(total - 1.0) < 1e-9);
  }

  const Csv trace = read_csv(learn_out / "trace.csv");
  REQUIRE(trace.header == std::vector<std::string>{"round", "objective"});
  REQUIRE(static_cast<int>(trace.rows.size()) == model["rounds"].get<int>());
  double previous = -1e300;
  for (const auto& row : trace.rows) {
    const double objective = std::stod(row[1]);
    CHECK(objective >= previous - 1e-5 * std::max(1.0, std::abs(previous)));
    previous = objective;
  }
  CHECK(model["final_objective"].get<double>() ==
        doctest::Approx(previous).epsilon(1e-9));
}

TEST_CASE("exit codes distinguish config, io, and usage failures") {
  const fs::path dir = work_dir() / "failures";
  fs::create_directories(dir);

  const fs::path bad_key = dir / "bad_key.cfg";
  write_file(bad_key, "definitely_not_a_key = 1\n");
  CHECK(run_cli("scaling --config " + bad_key.string()) == 2);

  const fs::path bad_value = dir / "bad_value.cfg";
  write_file(bad_value, "s_values = seven\n");
  CHECK(run_cli("scaling --config " + bad_value.string()) == 2);

  const fs::path bad_range = dir / "bad_range.cfg";
  write_file(bad_range, "s_values = 1000\n");
  CHECK(run_cli("scaling --config " + bad_range.string()) == 2);

  const fs::path bad_syntax = dir / "bad_syntax.cfg";
  write_file(bad_syntax, "just some words\n");
  CHECK(run_cli("scaling --config " + bad_syntax.string()) == 2);

  const fs::path duplicate = dir / "duplicate.cfg";
  write_file(duplicate, "seed = 1\nseed = 2\n");
  CHECK(run_cli("scaling --config " + duplicate.string()) == 2);

  CHECK(run_cli("scaling --config " + (dir / "missing.cfg").string()) == 4);

  const fs::path missing_data = dir / "missing_data.cfg";
  write_file(missing_data, "data = " + (dir / "absent.csv").string() + "\n");
  CHECK(run_cli("learn --config " + missing_data.string()) == 4);

  const fs::path empty = dir / "empty.cfg";
  write_file(empty, "");
  CHECK(run_cli("learn --config " + empty.string()) == 2);

  CHECK(run_cli("not_a_subcommand --config " + empty.string()) == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("learn exits with the convergence failure code when rounds run out") {
  const fs::path dir = work_dir() / "nonconverged";
  fs::create_directories(dir);
  const fs::path synth_config = dir / "synth.cfg";
  write_file(synth_config,
             "num_agents = 3\nsamples_per_agent = 60\nseed = 29\n");
  const fs::path data = dir / "data";
  REQUIRE(run_cli("synth --config " + synth_config.string() + " --out " +
                  data.string()) == 0);

  const fs::path learn_config = dir / "learn.cfg";
  write_file(learn_config,
             "data = " + (data / "agent_0.csv").string() + "," +
                 (data / "agent_1.csv").string() + "," +
                 (data / "agent_2.csv").string() +
                 "\n"
                 "max_rounds = 1\n"
                 "tolerance = 1e-12\n"
                 "seed = 1\n");
  const fs::path out = dir / "fit";
  CHECK(run_cli("learn --config " + learn_config.string() + " --out " +
                out.string()) == 3);
  // Outputs are still written for inspection.
  const json model = read_json(out / "model.json");
  CHECK_FALSE(model["converged"].get<bool>());
  CHECK(model["rounds"].get<int>() == 1);
}
