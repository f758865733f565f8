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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lca {

enum class PauliOp : std::uint8_t { I, X, Y, Z };

char to_char(PauliOp op);
PauliOp pauli_from_char(char c);

/// Weighted tensor product of single-qubit Paulis. ops[q] acts on qubit q.
struct PauliString {
  double coeff = 1.0;
  std::vector<PauliOp> ops;

  PauliString() = default;
  PauliString(double coeff, std::vector<PauliOp> ops) : coeff(coeff), ops(std::move(ops)) {}

  /// Identity string on n qubits with unit weight.
  static PauliString identity(int n);
  /// Builds a string from a label whose first character is qubit 0, e.g. "XIZ".
  static PauliString from_label(std::string_view label, double coeff = 1.0);

  int n_qubits() const { return static_cast<int>(ops.size()); }
  std::string label() const;
  bool is_identity() const;

  /// Bit q set when ops[q] is X or Y.
  std::uint64_t x_mask() const;
  /// Bit q set when ops[q] is Z or Y.
  std::uint64_t z_mask() const;
  int y_count() const;

  PauliString& set(int qubit, PauliOp op);
};

/// Hamiltonian as a list of real-weighted Pauli strings.
struct PauliSum {
  int n_qubits = 0;
  std::vector<PauliString> terms;

  PauliSum() = default;
  explicit PauliSum(int n) : n_qubits(n) {}

  void add(PauliString term);
  /// Throws ValidationError on mixed lengths or non-finite weights.
  void validate() const;
};

}  // namespace lca
