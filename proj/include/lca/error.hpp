// Copyright 2026 The LCA Authors
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

namespace lca {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON syntax, missing keys, duplicate ids).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// c^dagger S c fell below the degeneracy threshold.
class DegenerateCombination : public Error {
 public:
  using Error::Error;
};

/// Overlap with the gauge anchor is too small to fix the member phase.
class GaugeUndefined : public Error {
 public:
  using Error::Error;
};

/// Division by a near-zero reconstructed overlap.
class UnstableDivision : public Error {
 public:
  using Error::Error;
};

class UnsupportedGenerator : public Error {
 public:
  using Error::Error;
};

/// Histogram region of zero width.
class DegenerateRegion : public Error {
 public:
  using Error::Error;
};

/// Requested size exceeds what an exact oracle can handle.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace lca
