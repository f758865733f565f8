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

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lca/pauli.hpp"

namespace lca {

enum class GateKind { RX, RY, RZ, H, X, CNOT, CZ, CRX, CRY, CRZ, Pauli, PhaseOnZeros };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

/// Rotation kinds carry exactly one angle or parameter slot.
bool is_rotation(GateKind kind);
/// True for RX..CRZ: the trainable exponentials of a Pauli generator.
bool is_pauli_rotation(GateKind kind);
/// Number of qubits the kind acts on; 0 for PhaseOnZeros (acts on all).
int arity(GateKind kind);

/// One gate of a circuit. Controlled kinds list the control first.
///
/// A rotation's angle is either fixed (angle set, no slot), an unbound
/// parameter (slot set, no angle), or a bound parameter (both set, the slot
/// retained so derivative insertion can locate it after binding).
struct GateOp {
  GateKind kind = GateKind::H;
  std::vector<int> qubits;
  PauliOp pauli = PauliOp::I;
  std::optional<int> slot;
  std::optional<double> angle;

  static GateOp plain(GateKind kind, std::vector<int> qubits);
  static GateOp fixed(GateKind kind, std::vector<int> qubits, double angle);
  static GateOp parameterized(GateKind kind, std::vector<int> qubits, int slot);
  static GateOp pauli_gate(PauliOp op, int qubit);
  /// e^{i angle |0...0><0...0|} on all n qubits.
  static GateOp phase_on_zeros(int n_qubits, double angle);

  bool is_bound() const { return !is_rotation(kind) || angle.has_value(); }
};

/// A gate list over n_qubits. Templates instantiated from the ansatz library
/// record their id and repetition count; param_count is the number of
/// trainable slots across all repetitions.
struct Circuit {
  int n_qubits = 0;
  std::vector<GateOp> gates;
  int param_count = 0;
  int template_id = 0;
  int layers = 1;

  Circuit() = default;
  explicit Circuit(int n) : n_qubits(n) {}

  Circuit& add(GateOp op);
  bool is_bound() const;
  /// Throws ValidationError when any GateOp invariant is broken.
  void validate() const;
  /// Index of the gate that consumes the slot; throws DomainError when absent.
  std::size_t gate_of_slot(int slot) const;
};

/// Copies the circuit with every slot bound to params[slot].
Circuit bind(const Circuit& circuit, std::span<const double> params);

/// Inverse of a bound circuit. Slots are dropped from the result.
Circuit adjoint(const Circuit& bound);

/// Appends a bound circuit's gates to dst, dropping slot metadata.
void append(Circuit& dst, const Circuit& bound);

/// First `count` gates of the circuit.
Circuit prefix(const Circuit& circuit, std::size_t count);

/// Gates implementing e^{-i angle P/2} for a non-identity Pauli string,
/// with a CNOT parity ladder onto the highest supported qubit.
std::vector<GateOp> pauli_rotation_gates(const PauliString& pauli, double angle);

/// One term of the derivative dG/dtheta = sum_k scalar_k P_k G.
struct GeneratorTerm {
  PauliString pauli;
  std::complex<double> scalar;
};

/// Derivative decomposition of a single-parameter rotation. Uncontrolled
/// rotations yield one term (P, -i/2); controlled rotations yield two, since
/// |1><1| (x) P = (P_t - Z_c P_t)/2. Throws UnsupportedGenerator otherwise.
std::vector<GeneratorTerm> generator_of(const GateOp& gate, int n_qubits);

struct DerivativeCircuit {
  Circuit circuit;
  std::complex<double> scalar;
};

/// For each generator term of the gate consuming `slot`, the bound circuit
/// with that term's Paulis inserted right after the gate, and the scalar
/// such that d|psi>/dtheta = sum scalar * run(circuit).
std::vector<DerivativeCircuit> insert_generator(const Circuit& bound, int slot);

/// Gates acting on exactly two qubits, PhaseOnZeros excluded.
int count_two_qubit(const Circuit& circuit);

}  // namespace lca
