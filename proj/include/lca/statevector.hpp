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
#include <cstdint>
#include <vector>

#include "lca/circuit.hpp"
#include "lca/pauli.hpp"
#include "lca/rng.hpp"

namespace lca {

using cplx = std::complex<double>;

/// Amplitudes over 2^n basis states; qubit 0 is the least significant bit.
struct StateVector {
  int n_qubits = 0;
  std::vector<cplx> amps;

  StateVector() = default;
  /// |0...0> on n qubits.
  explicit StateVector(int n);
  StateVector(int n, std::vector<cplx> amplitudes);

  std::size_t dim() const { return amps.size(); }
  double norm_squared() const;
};

struct ReferenceSpec {
  enum class Kind { AllZeros, Explicit };
  Kind kind = Kind::AllZeros;
  std::vector<cplx> amps;

  static ReferenceSpec all_zeros() { return {}; }
  static ReferenceSpec explicit_state(std::vector<cplx> amps) {
    return {Kind::Explicit, std::move(amps)};
  }
};

/// Throws ValidationError when an explicit state's norm deviates from 1 by
/// more than 1e-8 and DimensionError on a length other than 2^n.
StateVector init_reference(int n, const ReferenceSpec& spec = {});

/// Applies a bound gate in place.
void apply_gate(StateVector& state, const GateOp& gate);

/// Applies every gate of a bound circuit. Throws ValidationError on an
/// unbound slot and DimensionError on a width mismatch.
void run_inplace(const Circuit& circuit, StateVector& state);
StateVector run(const Circuit& circuit, const StateVector& input);

/// P|psi> for the operator part of the string (the weight is ignored).
StateVector apply_pauli(const StateVector& state, const PauliString& pauli);

/// <a|b>.
cplx inner(const StateVector& a, const StateVector& b);

/// <a|P|b> including the string's weight.
cplx matrix_element(const StateVector& a, const StateVector& b, const PauliString& pauli);

/// Sum_s a_s <psi|P_s|psi>.
double expval(const StateVector& state, const PauliSum& h);

/// H|psi>.
StateVector apply_sum(const StateVector& state, const PauliSum& h);

/// <a|H|b>.
cplx matrix_element(const StateVector& a, const StateVector& b, const PauliSum& h);

double prob_all_zeros(const StateVector& state);

enum class EstimateKind {
  Probability,       // value in [0, 1]
  PauliExpectation,  // value in [-1, 1]
};

/// Finite-shot estimate of an exact measurement value: a binomial frequency
/// for probabilities and 2 * frequency(+1) - 1 for Pauli expectations.
/// Throws DomainError when shots < 1 or the value leaves its range by more
/// than 1e-9 (values within that slack are clamped).
double sample_estimate(double exact, EstimateKind kind, std::int64_t shots, Rng& rng);

}  // namespace lca
