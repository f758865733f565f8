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

#include "lca/gate_cost.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "lca/error.hpp"
#include "lca/templates.hpp"

namespace lca {

int GateCostModel::mcphase_cost(int n) const {
  if (n < 1) throw DomainError("mcphase_cost: n must be >= 1");
  if (auto it = mcphase_table.find(n); it != mcphase_table.end()) return it->second;
  return quad_a * n * n + quad_b * n + quad_c;
}

void GateCostModel::validate() const {
  if (toffoli_2q_cost < 0) throw ValidationError("toffoli_2q_cost must be nonnegative");
  if (mcphase_cost(3) != toffoli_2q_cost)
    throw ValidationError("mcphase_cost(3) must equal toffoli_2q_cost");
  int prev = mcphase_cost(1);
  if (prev < 0) throw ValidationError("mcphase_cost must be nonnegative");
  for (int n = 2; n <= 64; ++n) {
    int cur = mcphase_cost(n);
    if (cur < prev)
      throw ValidationError("mcphase_cost decreases at n=" + std::to_string(n));
    prev = cur;
  }
}

GateCostModel GateCostModel::from_json(std::string_view text) {
  GateCostModel m;
  try {
    auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw ParseError("cost model must be a JSON object");
    if (j.contains("toffoli_2q_cost")) m.toffoli_2q_cost = j.at("toffoli_2q_cost").get<int>();
    if (j.contains("mcphase_table")) {
      m.mcphase_table.clear();
      for (const auto& [k, v] : j.at("mcphase_table").items()) {
        std::size_t used = 0;
        int n = std::stoi(k, &used);
        if (used != k.size()) throw ParseError("mcphase_table key '" + k + "' is not an integer");
        m.mcphase_table[n] = v.get<int>();
      }
    }
    if (j.contains("quadratic")) {
      auto q = j.at("quadratic").get<std::vector<int>>();
      if (q.size() != 3) throw ParseError("'quadratic' must hold three integers");
      m.quad_a = q[0];
      m.quad_b = q[1];
      m.quad_c = q[2];
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("cost model: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("cost model: non-integer mcphase_table key");
  }
  m.validate();
  return m;
}

int ht_two_qubit_cost(std::span<const Circuit> circuits, const GateCostModel& model) {
  if (circuits.empty()) throw DomainError("ht_two_qubit_cost: empty circuit list");
  const int n = circuits.front().n_qubits;
  int total = 0;
  for (const Circuit& c : circuits) {
    if (c.n_qubits != n) throw ValidationError("ht_two_qubit_cost: mixed circuit widths");
    for (const GateOp& g : c.gates) {
      if (g.kind == GateKind::PhaseOnZeros)
        throw ValidationError("ht_two_qubit_cost: PHASE_ON_ZEROS has no controlled form here");
      total += g.qubits.size() == 1 ? 1 : model.toffoli_2q_cost;
    }
  }
  return total;
}

int pcm_two_qubit_cost(std::span<const Circuit> circuits, int n_qubits,
                       const GateCostModel& model) {
  if (circuits.empty()) throw DomainError("pcm_two_qubit_cost: empty circuit list");
  int total = 0;
  for (const Circuit& c : circuits) {
    total += count_two_qubit(c);
    for (const GateOp& g : c.gates)
      if (g.kind == GateKind::PhaseOnZeros) total += model.mcphase_cost(n_qubits);
  }
  return total;
}

GateCountRow cross_term_costs(const AnsatzLibrary& library, int id_i, int id_j, int n,
                              int depth, const GateCostModel& model) {
  auto bound = [&](int id) {
    Circuit c = library.instantiate(id, n, depth);
    std::vector<double> zeros(static_cast<std::size_t>(c.param_count), 0.0);
    return lca::bind(c, zeros);
  };
  const Circuit ui = bound(id_i);
  const Circuit uj = bound(id_j);
  const Circuit uj_dag = adjoint(uj);

  std::vector<Circuit> pcm{ui, uj_dag, Circuit(n), uj};
  pcm[2].add(GateOp::phase_on_zeros(n, M_PI));
  std::vector<Circuit> ht{adjoint(ui), uj};

  return GateCountRow{n, depth, ht_two_qubit_cost(ht, model),
                      pcm_two_qubit_cost(pcm, n, model)};
}

std::vector<GateCountRow> gate_count_grid(const AnsatzLibrary& library, int id_i, int id_j,
                                          std::span<const int> qubits,
                                          std::span<const int> depths,
                                          const GateCostModel& model) {
  std::vector<GateCountRow> rows;
  for (int n : qubits)
    for (int d : depths) rows.push_back(cross_term_costs(library, id_i, id_j, n, d, model));
  return rows;
}

}  // namespace lca
