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

#include "lca/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "lca/error.hpp"

namespace lca {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CRX: return "CRX";
    case GateKind::CRY: return "CRY";
    case GateKind::CRZ: return "CRZ";
    case GateKind::Pauli: return "PAULI";
    case GateKind::PhaseOnZeros: return "PHASE_ON_ZEROS";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  static constexpr GateKind kAll[] = {GateKind::RX,  GateKind::RY,  GateKind::RZ,   GateKind::H,
                                      GateKind::X,   GateKind::CNOT, GateKind::CZ,  GateKind::CRX,
                                      GateKind::CRY, GateKind::CRZ, GateKind::Pauli,
                                      GateKind::PhaseOnZeros};
  for (GateKind k : kAll)
    if (to_string(k) == name) return k;
  throw ParseError("unknown gate kind '" + std::string(name) + "'");
}

bool is_rotation(GateKind kind) {
  return is_pauli_rotation(kind) || kind == GateKind::PhaseOnZeros;
}

bool is_pauli_rotation(GateKind kind) {
  switch (kind) {
    case GateKind::RX: case GateKind::RY: case GateKind::RZ:
    case GateKind::CRX: case GateKind::CRY: case GateKind::CRZ:
      return true;
    default:
      return false;
  }
}

int arity(GateKind kind) {
  switch (kind) {
    case GateKind::CNOT: case GateKind::CZ: case GateKind::CRX: case GateKind::CRY:
    case GateKind::CRZ:
      return 2;
    case GateKind::PhaseOnZeros:
      return 0;
    default:
      return 1;
  }
}

GateOp GateOp::plain(GateKind kind, std::vector<int> qubits) {
  GateOp g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  return g;
}

GateOp GateOp::fixed(GateKind kind, std::vector<int> qubits, double angle) {
  GateOp g = plain(kind, std::move(qubits));
  g.angle = angle;
  return g;
}

GateOp GateOp::parameterized(GateKind kind, std::vector<int> qubits, int slot) {
  GateOp g = plain(kind, std::move(qubits));
  g.slot = slot;
  return g;
}

GateOp GateOp::pauli_gate(PauliOp op, int qubit) {
  GateOp g = plain(GateKind::Pauli, {qubit});
  g.pauli = op;
  return g;
}

GateOp GateOp::phase_on_zeros(int n_qubits, double angle) {
  std::vector<int> all(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) all[static_cast<std::size_t>(q)] = q;
  return fixed(GateKind::PhaseOnZeros, std::move(all), angle);
}

Circuit& Circuit::add(GateOp op) {
  gates.push_back(std::move(op));
  return *this;
}

bool Circuit::is_bound() const {
  return std::all_of(gates.begin(), gates.end(), [](const GateOp& g) { return g.is_bound(); });
}

void Circuit::validate() const {
  if (n_qubits < 1) throw ValidationError("circuit needs at least one qubit");
  std::set<int> seen_slots;
  for (std::size_t gi = 0; gi < gates.size(); ++gi) {
    const GateOp& g = gates[gi];
    const std::string where = "gate " + std::to_string(gi) + " (" + std::string(to_string(g.kind)) + ")";
    const int want = arity(g.kind);
    if (want == 0) {
      if (static_cast<int>(g.qubits.size()) != n_qubits)
        throw ValidationError(where + ": must act on all qubits");
    } else if (static_cast<int>(g.qubits.size()) != want) {
      throw ValidationError(where + ": expected " + std::to_string(want) + " qubit(s)");
    }
    std::set<int> distinct;
    for (int q : g.qubits) {
      if (q < 0 || q >= n_qubits) throw ValidationError(where + ": qubit index out of range");
      if (!distinct.insert(q).second) throw ValidationError(where + ": repeated qubit index");
    }
    if (is_rotation(g.kind)) {
      if (!g.slot && !g.angle) throw ValidationError(where + ": rotation needs an angle or a slot");
      if (g.slot) {
        if (*g.slot < 0 || *g.slot >= param_count)
          throw ValidationError(where + ": slot out of range");
        if (!seen_slots.insert(*g.slot).second)
          throw ValidationError(where + ": slot consumed by more than one gate");
      }
    } else if (g.slot || g.angle) {
      throw ValidationError(where + ": gate takes no angle");
    }
    if (g.kind == GateKind::Pauli && g.pauli == PauliOp::I)
      throw ValidationError(where + ": PAULI gate needs X, Y or Z");
  }
}

std::size_t Circuit::gate_of_slot(int slot) const {
  if (slot < 0 || slot >= param_count)
    throw DomainError("slot " + std::to_string(slot) + " out of range (param_count " +
                      std::to_string(param_count) + ")");
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (gates[i].slot && *gates[i].slot == slot) return i;
  throw DomainError("no gate consumes slot " + std::to_string(slot));
}

Circuit bind(const Circuit& circuit, std::span<const double> params) {
  if (static_cast<int>(params.size()) != circuit.param_count)
    throw DimensionError("bind: expected " + std::to_string(circuit.param_count) +
                         " parameters, got " + std::to_string(params.size()));
  Circuit out = circuit;
  for (GateOp& g : out.gates) {
    if (!g.slot) continue;
    double v = params[static_cast<std::size_t>(*g.slot)];
    if (!std::isfinite(v)) throw DomainError("bind: non-finite parameter");
    g.angle = v;
  }
  return out;
}

Circuit adjoint(const Circuit& bound) {
  if (!bound.is_bound()) throw DomainError("adjoint: circuit has unbound slots");
  Circuit out(bound.n_qubits);
  out.gates.reserve(bound.gates.size());
  for (auto it = bound.gates.rbegin(); it != bound.gates.rend(); ++it) {
    GateOp g = *it;
    g.slot.reset();
    if (g.angle) g.angle = -*g.angle;
    out.gates.push_back(std::move(g));
  }
  return out;
}

void append(Circuit& dst, const Circuit& bound) {
  if (dst.n_qubits != bound.n_qubits) throw DimensionError("append: qubit counts differ");
  if (!bound.is_bound()) throw DomainError("append: circuit has unbound slots");
  for (GateOp g : bound.gates) {
    g.slot.reset();
    dst.gates.push_back(std::move(g));
  }
}

Circuit prefix(const Circuit& circuit, std::size_t count) {
  Circuit out = circuit;
  out.gates.resize(std::min(count, circuit.gates.size()));
  return out;
}

std::vector<GateOp> pauli_rotation_gates(const PauliString& pauli, double angle) {
  std::vector<int> support;
  for (int q = 0; q < pauli.n_qubits(); ++q)
    if (pauli.ops[static_cast<std::size_t>(q)] != PauliOp::I) support.push_back(q);
  if (support.empty()) throw DomainError("pauli_rotation_gates: identity string is a global phase");

  constexpr double kHalfPi = std::numbers::pi / 2;
  std::vector<GateOp> to_z, from_z;
  for (int q : support) {
    switch (pauli.ops[static_cast<std::size_t>(q)]) {
      case PauliOp::X:
        to_z.push_back(GateOp::plain(GateKind::H, {q}));
        from_z.push_back(GateOp::plain(GateKind::H, {q}));
        break;
      case PauliOp::Y:
        // RX(pi/2) Y RX(-pi/2) = Z
        to_z.push_back(GateOp::fixed(GateKind::RX, {q}, kHalfPi));
        from_z.push_back(GateOp::fixed(GateKind::RX, {q}, -kHalfPi));
        break;
      default:
        break;
    }
  }
  const int target = support.back();
  std::vector<GateOp> out = to_z;
  for (std::size_t k = 0; k + 1 < support.size(); ++k)
    out.push_back(GateOp::plain(GateKind::CNOT, {support[k], target}));
  out.push_back(GateOp::fixed(GateKind::RZ, {target}, angle));
  for (std::size_t k = support.size() - 1; k-- > 0;)
    out.push_back(GateOp::plain(GateKind::CNOT, {support[k], target}));
  out.insert(out.end(), from_z.begin(), from_z.end());
  return out;
}

std::vector<GeneratorTerm> generator_of(const GateOp& gate, int n_qubits) {
  if (!is_pauli_rotation(gate.kind))
    throw UnsupportedGenerator("generator_of: " + std::string(to_string(gate.kind)) +
                               " is not a Pauli-generated rotation");
  PauliOp axis = PauliOp::I;
  switch (gate.kind) {
    case GateKind::RX: case GateKind::CRX: axis = PauliOp::X; break;
    case GateKind::RY: case GateKind::CRY: axis = PauliOp::Y; break;
    default: axis = PauliOp::Z; break;
  }
  const std::complex<double> minus_half_i(0.0, -0.5);
  if (arity(gate.kind) == 1) {
    PauliString p = PauliString::identity(n_qubits);
    p.set(gate.qubits[0], axis);
    return {{std::move(p), minus_half_i}};
  }
  const int control = gate.qubits[0];
  const int target = gate.qubits[1];
  PauliString p_t = PauliString::identity(n_qubits);
  p_t.set(target, axis);
  PauliString zp = p_t;
  zp.set(control, PauliOp::Z);
  return {{std::move(p_t), minus_half_i / 2.0}, {std::move(zp), -minus_half_i / 2.0}};
}

std::vector<DerivativeCircuit> insert_generator(const Circuit& bound, int slot) {
  const std::size_t gi = bound.gate_of_slot(slot);
  std::vector<DerivativeCircuit> out;
  for (GeneratorTerm& term : generator_of(bound.gates[gi], bound.n_qubits)) {
    Circuit c = bound;
    std::vector<GateOp> paulis;
    for (int q = 0; q < term.pauli.n_qubits(); ++q) {
      PauliOp op = term.pauli.ops[static_cast<std::size_t>(q)];
      if (op != PauliOp::I) paulis.push_back(GateOp::pauli_gate(op, q));
    }
    c.gates.insert(c.gates.begin() + static_cast<std::ptrdiff_t>(gi + 1), paulis.begin(),
                   paulis.end());
    out.push_back({std::move(c), term.scalar});
  }
  return out;
}

int count_two_qubit(const Circuit& circuit) {
  int n = 0;
  for (const GateOp& g : circuit.gates)
    if (g.kind != GateKind::PhaseOnZeros && g.qubits.size() == 2) ++n;
  return n;
}

}  // namespace lca
