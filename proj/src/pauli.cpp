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

#include "lca/pauli.hpp"

#include <bit>
#include <cmath>

#include "lca/error.hpp"

namespace lca {

char to_char(PauliOp op) {
  switch (op) {
    case PauliOp::I: return 'I';
    case PauliOp::X: return 'X';
    case PauliOp::Y: return 'Y';
    case PauliOp::Z: return 'Z';
  }
  return '?';
}

PauliOp pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return PauliOp::I;
    case 'X': case 'x': return PauliOp::X;
    case 'Y': case 'y': return PauliOp::Y;
    case 'Z': case 'z': return PauliOp::Z;
    default: throw ParseError(std::string("unknown Pauli symbol '") + c + "'");
  }
}

PauliString PauliString::identity(int n) {
  return PauliString(1.0, std::vector<PauliOp>(static_cast<std::size_t>(n), PauliOp::I));
}

PauliString PauliString::from_label(std::string_view label, double coeff) {
  std::vector<PauliOp> ops;
  ops.reserve(label.size());
  for (char c : label) ops.push_back(pauli_from_char(c));
  return PauliString(coeff, std::move(ops));
}

std::string PauliString::label() const {
  std::string s;
  s.reserve(ops.size());
  for (PauliOp op : ops) s.push_back(to_char(op));
  return s;
}

bool PauliString::is_identity() const {
  for (PauliOp op : ops)
    if (op != PauliOp::I) return false;
  return true;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < ops.size(); ++q)
    if (ops[q] == PauliOp::X || ops[q] == PauliOp::Y) m |= (1ULL << q);
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < ops.size(); ++q)
    if (ops[q] == PauliOp::Z || ops[q] == PauliOp::Y) m |= (1ULL << q);
  return m;
}

int PauliString::y_count() const {
  int n = 0;
  for (PauliOp op : ops) n += (op == PauliOp::Y);
  return n;
}

PauliString& PauliString::set(int qubit, PauliOp op) {
  if (qubit < 0 || qubit >= n_qubits()) throw DimensionError("Pauli qubit index out of range");
  ops[static_cast<std::size_t>(qubit)] = op;
  return *this;
}

void PauliSum::add(PauliString term) {
  if (terms.empty() && n_qubits == 0) n_qubits = term.n_qubits();
  terms.push_back(std::move(term));
}

void PauliSum::validate() const {
  for (const auto& t : terms) {
    if (t.n_qubits() != n_qubits)
      throw ValidationError("Pauli term '" + t.label() + "' does not match the sum's qubit count");
    if (!std::isfinite(t.coeff)) throw ValidationError("non-finite Pauli weight");
  }
}

}  // namespace lca
