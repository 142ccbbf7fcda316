// Copyright 2026 The ldp-classify Authors
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

#ifndef LDP_ERRORS_HPP_
#define LDP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ldp {

// A point lies outside [0,1]^d, or a label is not in {0,1}.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A parameter violates its documented range (bandwidth, budget, counts, ...).
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Report lists of unequal length where equal halves are required.
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A report carries the wrong half tag for the requested operation.
class TagError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed configuration documents, files, or mismatched grids.
// The CLI maps this class (and anything equivalent) to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ldp

#endif  // LDP_ERRORS_HPP_
