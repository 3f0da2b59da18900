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

#include "dclearn/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dclearn/error.hpp"

namespace dcl {

namespace {

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

void check_agent_params(int size, int degree, int num_chunks) {
  require(size >= 2, ErrorCode::invalid_argument,
          "need at least 2 agents, got " + std::to_string(size));
  require(degree >= 1 && degree <= size - 1, ErrorCode::invalid_argument,
          "degree must be in [1, size - 1], got " + std::to_string(degree));
  require(num_chunks >= 1, ErrorCode::invalid_argument,
          "num_chunks must be at least 1");
}

void check_slot_params(long total_slots, int degree, long num_tapped,
                       int num_chunks) {
  require(total_slots >= 1, ErrorCode::invalid_argument,
          "total_slots must be positive");
  require(degree >= 1 && degree <= total_slots, ErrorCode::invalid_argument,
          "degree must be in [1, total_slots]");
  require(num_tapped >= 0 && num_tapped <= total_slots,
          ErrorCode::invalid_argument,
          "num_tapped must be in [0, total_slots]");
  require(num_chunks >= 1, ErrorCode::invalid_argument,
          "num_chunks must be at least 1");
}

void check_risk(double risk) {
  require(risk > 0.0 && risk < 1.0, ErrorCode::invalid_argument,
          "risk must lie strictly between 0 and 1");
}

}  // namespace

double breach_single(int size, int degree, int num_chunks) {
  check_agent_params(size, degree, num_chunks);
  const double per_round = static_cast<double>(degree) / (size - 1);
  return clamp01(std::pow(per_round, num_chunks));
}

double breach_any(int size, int degree, int num_chunks) {
  return clamp01((size - 1) * breach_single(size, degree, num_chunks));
}

double system_security_bound(int size, int max_degree, int num_chunks) {
  check_agent_params(size, max_degree, num_chunks);
  const double exposure =
      static_cast<double>(size) * (size - 1) *
      std::pow(static_cast<double>(max_degree) / (size - 1), num_chunks);
  return clamp01(1.0 - exposure);
}

double collusion_breach_exact(int size, int degree, int num_colluders,
                              int num_chunks) {
  check_agent_params(size, degree, num_chunks);
  require(num_colluders >= 0 && num_colluders <= size - 1,
          ErrorCode::invalid_argument,
          "num_colluders must be in [0, size - 1]");
  if (num_colluders == 0) return 0.0;
  // With num_colluders >= size - degree the neighborhood cannot avoid the
  // colluders, so every round leaks.
  if (num_colluders >= size - degree) return 1.0;
  double log_miss = 0.0;
  for (int l = 1; l <= num_colluders; ++l)
    log_miss += std::log1p(-static_cast<double>(degree) / (size - l));
  const double per_round = -std::expm1(log_miss);
  return clamp01(std::pow(per_round, num_chunks));
}

double collusion_breach_bound(int size, int degree, int num_colluders,
                              int num_chunks) {
  check_agent_params(size, degree, num_chunks);
  require(num_colluders >= 0 && num_colluders <= size - 1,
          ErrorCode::invalid_argument,
          "num_colluders must be in [0, size - 1]");
  if (num_colluders >= size - degree) return 1.0;
  const double miss_floor =
      1.0 - static_cast<double>(degree) / (size - num_colluders);
  const double exponent =
      num_chunks * std::pow(miss_floor, num_colluders);
  return clamp01(std::exp(-exponent));
}

double eavesdrop_breach_exact(long total_slots, int degree, long num_tapped,
                              int num_chunks) {
  check_slot_params(total_slots, degree, num_tapped, num_chunks);
  if (num_tapped == 0) return 0.0;
  if (num_tapped > total_slots - degree) return 1.0;
  double log_miss = 0.0;
  for (int l = 0; l < degree; ++l)
    log_miss +=
        std::log1p(-static_cast<double>(num_tapped) / (total_slots - l));
  const double per_round = -std::expm1(log_miss);
  return clamp01(std::pow(per_round, num_chunks));
}

double eavesdrop_breach_bound(long total_slots, int degree, long num_tapped,
                              int num_chunks) {
  check_slot_params(total_slots, degree, num_tapped, num_chunks);
  if (num_tapped >= total_slots - degree + 1) return 1.0;
  const double miss_floor =
      1.0 - static_cast<double>(num_tapped) / (total_slots - degree + 1);
  const double exponent = num_chunks * std::pow(miss_floor, degree);
  return clamp01(std::exp(-exponent));
}

int min_chunks_collusion(double risk, int size, int degree, int num_colluders) {
  check_risk(risk);
  check_agent_params(size, degree, 1);
  require(num_colluders >= 0 && num_colluders <= size - 1,
          ErrorCode::invalid_argument,
          "num_colluders must be in [0, size - 1]");
  if (num_colluders == 0) return 1;
  require(num_colluders < size - degree, ErrorCode::invalid_argument,
          "an adversary adjacent in every round cannot be defended against");
  const double miss_floor =
      1.0 - static_cast<double>(degree) / (size - num_colluders);
  const double needed =
      -std::log(risk) / std::pow(miss_floor, num_colluders);
  return std::max(1, static_cast<int>(std::ceil(needed)));
}

int min_chunks_eavesdrop(double risk, long total_slots, int degree,
                         long num_tapped) {
  check_risk(risk);
  check_slot_params(total_slots, degree, num_tapped, 1);
  if (num_tapped == 0) return 1;
  require(num_tapped < total_slots - degree + 1, ErrorCode::invalid_argument,
          "an eavesdropper covering every possible slot cannot be defended against");
  const double miss_floor =
      1.0 - static_cast<double>(num_tapped) / (total_slots - degree + 1);
  const double needed = -std::log(risk) / std::pow(miss_floor, degree);
  return std::max(1, static_cast<int>(std::ceil(needed)));
}

}  // namespace dcl
