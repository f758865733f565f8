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

#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "lca/circuit.hpp"

namespace lca {

/// Two-qubit-gate accounting constants. mcphase_cost(n) is the cost of the
/// n-qubit phase gate e^{i theta |0..0><0..0|}: the table when n is listed,
/// otherwise quad_a n^2 + quad_b n + quad_c.
struct GateCostModel {
  int toffoli_2q_cost = 5;
  std::map<int, int> mcphase_table{{1, 0}, {2, 1}, {3, 5}};
  int quad_a = 2;
  int quad_b = -6;
  int quad_c = 5;

  int mcphase_cost(int n_qubits) const;

  /// Throws ValidationError unless mcphase_cost is nondecreasing on 1..64
  /// and mcphase_cost(3) == toffoli_2q_cost.
  void validate() const;

  /// Keys: toffoli_2q_cost, mcphase_table ({"n": cost}), quadratic ([a,b,c]).
  /// Missing keys keep their defaults. Throws ParseError / ValidationError.
  static GateCostModel from_json(std::string_view text);
};

/// Cost of one Hadamard-test cross-term circuit controlling every listed
/// circuit: each single-qubit gate counts 1 and each two-qubit gate counts
/// toffoli_2q_cost. Throws DomainError on an empty list and ValidationError
/// on PHASE_ON_ZEROS gates or mismatched widths.
int ht_two_qubit_cost(std::span<const Circuit> circuits, const GateCostModel& model);

/// Cost of the same cross term run without control: two-qubit gates as
/// listed plus mcphase_cost(n_qubits) per PHASE_ON_ZEROS.
int pcm_two_qubit_cost(std::span<const Circuit> circuits, int n_qubits,
                       const GateCostModel& model);

struct GateCountRow {
  int n_qubits;
  int depth;
  int ht_cost;
  int pcm_cost;
};

class AnsatzLibrary;

/// Step-3 cross-term comparison for the ordered pair (i, j): the ancilla-free
/// circuit {U^i, U^j dagger, G, U^j} against controlled {U^i dagger, U^j}.
GateCountRow cross_term_costs(const AnsatzLibrary& library, int id_i, int id_j, int n_qubits,
                              int depth, const GateCostModel& model);

std::vector<GateCountRow> gate_count_grid(const AnsatzLibrary& library, int id_i, int id_j,
                                          std::span<const int> qubits,
                                          std::span<const int> depths,
                                          const GateCostModel& model);

}  // namespace lca
