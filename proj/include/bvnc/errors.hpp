// Copyright 2026 The bvnc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace bvnc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch: non-square matrix, unequal permutation lengths, ...
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Value-level precondition violation: negative entries, non-stochastic
// input, invalid weights, ...
class DomainError : public Error {
 public:
  using Error::Error;
};

// Structural precondition violation (e.g. a matrix that is not circulant,
// a block whose body clashes with its controls).
class StructureError : public Error {
 public:
  using Error::Error;
};

// Index outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Iteration limit reached before the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_deviation)
      : Error(what), last_deviation_(last_deviation) {}
  double last_deviation() const { return last_deviation_; }

 private:
  double last_deviation_;
};

// Problem size exceeds a hard resource cap (e.g. dense-simulation width).
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace bvnc
