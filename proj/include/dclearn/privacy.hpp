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

#pragma once

namespace dcl {

// Breach probabilities for chunked aggregation. An agent's value is exposed
// only if an adversary captures its raw chunk in the first transmission of
// every one of the num_chunks rounds; each round redraws the victim's
// neighborhood. All results are probabilities in [0, 1].

// One fixed curious agent: it is a neighbor of the victim in a given round
// with probability degree / (size - 1), so the victim is breached with
// probability (degree / (size - 1))^num_chunks.
double breach_single(int size, int degree, int num_chunks);

// Union bound over all size - 1 potential curious agents.
double breach_any(int size, int degree, int num_chunks);

// Union bound over every (victim, adversary) pair in the whole system:
// the probability that NO value anywhere is exposed is at least
// 1 - size * (size - 1) * (max_degree / (size - 1))^num_chunks.
double system_security_bound(int size, int max_degree, int num_chunks);

// num_colluders agents pool what they receive. Exactly
// {1 - prod_{l=1..num_colluders} (1 - degree / (size - l))}^num_chunks:
// the inner product is the chance that a fresh neighborhood of `degree`
// nodes avoids all colluders. Certain (1) once num_colluders >= size - degree.
double collusion_breach_exact(int size, int degree, int num_colluders,
                              int num_chunks);

// Closed-form upper bound exp(-num_chunks * (1 - degree / (size -
// num_colluders))^num_colluders), valid wherever the exact value is below 1.
double collusion_breach_bound(int size, int degree, int num_colluders,
                              int num_chunks);

// An eavesdropper taps num_tapped of the total_slots directed transmission
// slots; the victim's degree slots are redrawn each round. Exactly
// {1 - prod_{l=0..degree-1} (1 - num_tapped / (total_slots - l))}^num_chunks,
// certain once num_tapped > total_slots - degree.
double eavesdrop_breach_exact(long total_slots, int degree, long num_tapped,
                              int num_chunks);

// Upper bound exp(-num_chunks * (1 - num_tapped / (total_slots - degree +
// 1))^degree).
double eavesdrop_breach_bound(long total_slots, int degree, long num_tapped,
                              int num_chunks);

// Smallest chunk count whose collusion bound is at most `risk`:
// ceil(|ln risk| / (1 - degree / (size - num_colluders))^num_colluders),
// never below 1. Zero colluders need no masking at all, so the answer is 1;
// an adversary that is always adjacent (num_colluders >= size - degree)
// cannot be defended against and raises ErrorCode::invalid_argument.
int min_chunks_collusion(double risk, int size, int degree, int num_colluders);

// Same sizing against an eavesdropper:
// ceil(|ln risk| / (1 - num_tapped / (total_slots - degree + 1))^degree).
int min_chunks_eavesdrop(double risk, long total_slots, int degree,
                         long num_tapped);

}  // namespace dcl
