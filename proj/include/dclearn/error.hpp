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

#include <stdexcept>
#include <string>

namespace dcl {

// Error categories carried by every dcl::Error. They map one-to-one onto the
// status codes of the C interface in dclearn.h.
enum class ErrorCode {
  invalid_argument = 1,  // bad sizes, ranges, or parameter combinations
  numeric = 2,           // overflow, singularity, loss of positive definiteness
  no_convergence = 3,    // an iteration hit its budget before its tolerance
  size_limit = 4,        // input exceeds a documented hard limit
  construction_failed = 5,  // a randomized builder exhausted its retry budget
  io = 6,                // file read/write or parse failure
  stalled = 7,           // an objective moved the wrong way beyond tolerance
  aggregation = 8,       // a distributed aggregation round failed to settle
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace dcl
