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

#include "lca/statevector.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "lca/error.hpp"

namespace lca {
namespace {

using Mat2 = std::array<cplx, 4>;  // row-major

constexpr cplx kI{0.0, 1.0};

Mat2 rotation_matrix(GateKind kind, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
      return {c, -kI * s, -kI * s, c};
    case GateKind::RY:
    case GateKind::CRY:
      return {c, -s, s, c};
    case GateKind::RZ:
    case GateKind::CRZ:
      return {std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2)};
    default:
      throw DomainError("rotation_matrix: not a rotation");
  }
}

// Applies m to `target` on the subspace where all bits in `ctrl_mask` are set.
void apply_2x2(std::vector<cplx>& a, int target, std::uint64_t ctrl_mask, const Mat2& m) {
  const std::uint64_t tbit = std::uint64_t{1} << target;
  const std::uint64_t dim = a.size();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & tbit) continue;
    if ((i & ctrl_mask) != ctrl_mask) continue;
    const cplx a0 = a[i], a1 = a[i | tbit];
    a[i] = m[0] * a0 + m[1] * a1;
    a[i | tbit] = m[2] * a0 + m[3] * a1;
  }
}

void apply_x(std::vector<cplx>& a, int target, std::uint64_t ctrl_mask) {
  const std::uint64_t tbit = std::uint64_t{1} << target;
  for (std::uint64_t i = 0; i < a.size(); ++i)
    if (!(i & tbit) && (i & ctrl_mask) == ctrl_mask) std::swap(a[i], a[i | tbit]);
}

void check_same_dim(const StateVector& a, const StateVector& b, const char* what) {
  if (a.n_qubits != b.n_qubits || a.dim() != b.dim())
    throw DimensionError(std::string(what) + ": qubit counts differ (" +
                         std::to_string(a.n_qubits) + " vs " + std::to_string(b.n_qubits) + ")");
}

void check_pauli_dim(const StateVector& s, const PauliString& p, const char* what) {
  if (p.n_qubits() != s.n_qubits)
    throw DimensionError(std::string(what) + ": Pauli string has " +
                         std::to_string(p.n_qubits()) + " qubits, state has " +
                         std::to_string(s.n_qubits));
}

// i^{ny} (-1)^{popcount(b & z)} applied as <b ^ x| P |b>.
cplx pauli_phase(const PauliString& p) {
  static constexpr cplx kPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPow[p.y_count() % 4];
}

}  // namespace

StateVector::StateVector(int n) : n_qubits(n) {
  if (n < 0 || n > 30) throw DomainError("StateVector: unsupported qubit count " + std::to_string(n));
  amps.assign(std::size_t{1} << n, cplx{0.0, 0.0});
  amps[0] = 1.0;
}

StateVector::StateVector(int n, std::vector<cplx> amplitudes)
    : n_qubits(n), amps(std::move(amplitudes)) {
  if (n < 0 || n > 30 || amps.size() != (std::size_t{1} << n))
    throw DimensionError("StateVector: " + std::to_string(amps.size()) +
                         " amplitudes do not match " + std::to_string(n) + " qubits");
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const cplx& z : amps) s += std::norm(z);
  return s;
}

StateVector init_reference(int n, const ReferenceSpec& spec) {
  if (spec.kind == ReferenceSpec::Kind::AllZeros) return StateVector(n);
  StateVector s(n, spec.amps);
  const double norm = std::sqrt(s.norm_squared());
  if (std::abs(norm - 1.0) > 1e-8)
    throw ValidationError("reference state is not normalized (norm " + std::to_string(norm) + ")");
  return s;
}

void apply_gate(StateVector& state, const GateOp& g) {
  for (int q : g.qubits)
    if (q < 0 || q >= state.n_qubits)
      throw DimensionError("apply_gate: qubit " + std::to_string(q) + " out of range");
  if (is_rotation(g.kind) && !g.angle)
    throw ValidationError("apply_gate: unbound parameter slot on " + std::string(to_string(g.kind)));
  auto& a = state.amps;
  switch (g.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      apply_2x2(a, g.qubits[0], 0, rotation_matrix(g.kind, *g.angle));
      break;
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ:
      apply_2x2(a, g.qubits[1], std::uint64_t{1} << g.qubits[0], rotation_matrix(g.kind, *g.angle));
      break;
    case GateKind::H: {
      const double r = M_SQRT1_2;
      apply_2x2(a, g.qubits[0], 0, {r, r, r, -r});
      break;
    }
    case GateKind::X:
      apply_x(a, g.qubits[0], 0);
      break;
    case GateKind::CNOT:
      apply_x(a, g.qubits[1], std::uint64_t{1} << g.qubits[0]);
      break;
    case GateKind::CZ: {
      const std::uint64_t m = (std::uint64_t{1} << g.qubits[0]) | (std::uint64_t{1} << g.qubits[1]);
      for (std::uint64_t i = 0; i < a.size(); ++i)
        if ((i & m) == m) a[i] = -a[i];
      break;
    }
    case GateKind::Pauli: {
      PauliString p = PauliString::identity(state.n_qubits);
      p.set(g.qubits[0], g.pauli);
      state = apply_pauli(state, p);
      break;
    }
    case GateKind::PhaseOnZeros:
      a[0] *= std::polar(1.0, *g.angle);
      break;
  }
}

void run_inplace(const Circuit& circuit, StateVector& state) {
  if (circuit.n_qubits != state.n_qubits)
    throw DimensionError("run: circuit has " + std::to_string(circuit.n_qubits) +
                         " qubits, state has " + std::to_string(state.n_qubits));
  for (const GateOp& g : circuit.gates) apply_gate(state, g);
}

StateVector run(const Circuit& circuit, const StateVector& input) {
  StateVector s = input;
  run_inplace(circuit, s);
  return s;
}

StateVector apply_pauli(const StateVector& state, const PauliString& p) {
  check_pauli_dim(state, p, "apply_pauli");
  const std::uint64_t xm = p.x_mask(), zm = p.z_mask();
  const cplx ph = pauli_phase(p);
  StateVector out(state.n_qubits, std::vector<cplx>(state.dim()));
  for (std::uint64_t b = 0; b < state.dim(); ++b) {
    const double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    out.amps[b ^ xm] = ph * sign * state.amps[b];
  }
  return out;
}

cplx inner(const StateVector& a, const StateVector& b) {
  check_same_dim(a, b, "inner");
  cplx s = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) s += std::conj(a.amps[k]) * b.amps[k];
  return s;
}

cplx matrix_element(const StateVector& a, const StateVector& b, const PauliString& p) {
  check_same_dim(a, b, "matrix_element");
  check_pauli_dim(a, p, "matrix_element");
  const std::uint64_t xm = p.x_mask(), zm = p.z_mask();
  cplx s = 0.0;
  for (std::uint64_t k = 0; k < b.dim(); ++k) {
    const double sign = (std::popcount(k & zm) & 1) ? -1.0 : 1.0;
    s += std::conj(a.amps[k ^ xm]) * sign * b.amps[k];
  }
  return p.coeff * pauli_phase(p) * s;
}

double expval(const StateVector& state, const PauliSum& h) {
  if (h.n_qubits != state.n_qubits && !h.terms.empty())
    throw DimensionError("expval: Hamiltonian width differs from the state");
  double e = 0.0;
  for (const PauliString& t : h.terms) e += matrix_element(state, state, t).real();
  return e;
}

StateVector apply_sum(const StateVector& state, const PauliSum& h) {
  if (h.n_qubits != state.n_qubits && !h.terms.empty())
    throw DimensionError("apply_sum: Hamiltonian width differs from the state");
  StateVector out(state.n_qubits, std::vector<cplx>(state.dim()));
  for (const PauliString& t : h.terms) {
    check_pauli_dim(state, t, "apply_sum");
    const std::uint64_t xm = t.x_mask(), zm = t.z_mask();
    const cplx ph = t.coeff * pauli_phase(t);
    for (std::uint64_t b = 0; b < state.dim(); ++b) {
      const double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
      out.amps[b ^ xm] += ph * sign * state.amps[b];
    }
  }
  return out;
}

cplx matrix_element(const StateVector& a, const StateVector& b, const PauliSum& h) {
  check_same_dim(a, b, "matrix_element");
  return inner(a, apply_sum(b, h));
}

double prob_all_zeros(const StateVector& state) { return std::norm(state.amps.at(0)); }

double sample_estimate(double exact, EstimateKind kind, std::int64_t shots, Rng& rng) {
  if (shots < 1) throw DomainError("sample_estimate: shots must be >= 1");
  constexpr double slack = 1e-9;
  double p;
  if (kind == EstimateKind::Probability) {
    if (exact < -slack || exact > 1 + slack)
      throw DomainError("sample_estimate: probability " + std::to_string(exact) + " out of range");
    p = std::clamp(exact, 0.0, 1.0);
  } else {
    if (exact < -1 - slack || exact > 1 + slack)
      throw DomainError("sample_estimate: expectation " + std::to_string(exact) + " out of range");
    p = std::clamp((1.0 + exact) / 2.0, 0.0, 1.0);
  }
  std::binomial_distribution<std::int64_t> bin(shots, p);
  const double freq = static_cast<double>(bin(rng)) / static_cast<double>(shots);
  return kind == EstimateKind::Probability ? freq : 2.0 * freq - 1.0;
}

}  // namespace lca
