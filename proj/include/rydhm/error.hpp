// Copyright 2026 The rydhm Authors
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

namespace rydhm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Two atoms at the same position, or a geometry too small to define a scale.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// The generator has no unique null vector (rank deficiency other than one).
class NonUniqueSteadyStateError : public Error {
 public:
  using Error::Error;
};

/// Back substitution produced a vector that cannot be normalized to a
/// probability distribution.
class DegenerateSolutionError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a hard size limit (e.g. exact N-atom generators).
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// An observable is undefined for the accumulated data (e.g. zero mean).
class UndefinedObservableError : public Error {
 public:
  using Error::Error;
};

}  // namespace rydhm
