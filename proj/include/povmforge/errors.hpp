// Copyright 2026 The povm-forge Authors
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

namespace povmforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (matrix dims, outcome counts, tensor factors).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A requested size exceeds the configured dimension cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// An operator expected to be positive semidefinite has a negative eigenvalue.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument is outside of its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Effects do not sum to the identity, probabilities do not sum to one, etc.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The requested operation has no implementation for this combination of inputs.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input (JSON files, command-line specs).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace povmforge
