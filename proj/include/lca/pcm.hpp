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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lca/circuit.hpp"
#include "lca/lca.hpp"
#include "lca/pauli.hpp"
#include "lca/statevector.hpp"

namespace lca {

enum class PcmMode { Exact, Shots };

/// Settings of the ancilla-free overlap protocol.
///
/// Each x must satisfy |1 - x| = 1 so that I - x|0><0| is the unitary
/// phase gate e^{i arg(1-x) |0><0|}.
struct PcmSettings {
  std::array<cplx, 2> x_values{cplx(2.0, 0.0), cplx(1.0, -1.0)};
  PcmMode mode = PcmMode::Exact;
  std::int64_t shots = 0;
  double gauge_tolerance = 1e-6;
  /// Pick the anchor maximizing its smallest overlap with the other states
  /// instead of member 0.
  bool reanchor = false;

  /// Throws DomainError on non-unitary or coinciding x values, a
  /// nonpositive tolerance, or shot mode with shots < 1.
  void validate() const;
};

/// Phase-gate angle implementing I - x|0><0|. Throws DomainError if
/// |1 - x| differs from 1 by more than 1e-12.
double phase_angle_for(cplx x);

/// Solves conj(x_k) A + x_k B = R_k for k = 1, 2. Throws DomainError when
/// the system is singular.
std::pair<cplx, cplx> solve_conjugate_pair(cplx x1, cplx x2, double r1, double r2);

/// One executed measurement circuit.
struct PcmMeasurement {
  std::string kind;       // overlap | triple | pauli | pauli_triple
  std::vector<int> states;
  cplx x{0.0, 0.0};
  std::string pauli;      // empty for probability measurements
  double value = 0.0;
};

struct PauliCross {
  int i = 0;
  int j = 0;
  std::string pauli;
  cplx trace;  // Tr(rho_j rho_i P)
};

/// Audit record of a matrix reconstruction.
struct PcmRecord {
  int anchor = 0;
  std::vector<double> r_anchor;   // Tr(rho_a rho_k) for every state k
  Eigen::MatrixXcd cross;         // Tr(rho_a rho_i rho_j), solved A
  Eigen::MatrixXcd cross_b;       // Tr(rho_i rho_a rho_j), solved B
  std::vector<PauliCross> pauli_cross;
  std::vector<PcmMeasurement> measurements;
  Eigen::MatrixXcd S;
  Eigen::MatrixXcd Hm;

  /// JSON document holding every raw measurement and reconstructed matrix.
  std::string to_json() const;
};

/// States are registered as bound circuits W_k with |psi_k> = W_k |0...0>.
/// Every measurement is executed once per session and memoized; in shot
/// mode each measurement draws from its own stream keyed by the session
/// seed and the measurement identity, independent of call order. A session
/// is not thread-safe.
class PcmSession {
 public:
  PcmSession(int n_qubits, PcmSettings settings, std::uint64_t seed,
             std::optional<Circuit> prep = std::nullopt);

  /// Registers prep + member and returns the state index.
  int add_member(const Circuit& bound_member);
  int state_count() const { return static_cast<int>(circuits_.size()); }
  const PcmSettings& settings() const { return settings_; }

  /// Selects the gauge anchor: `preferred`, or with reanchor enabled the
  /// state among `candidates` maximizing its smallest overlap with them.
  void choose_anchor(int preferred, const std::vector<int>& candidates);
  int anchor() const { return anchor_; }

  /// |<psi_a|psi_b>|^2 from the circuit {W_a, W_b^dagger}.
  double r(int a, int b);
  /// Tr((I - x rho_m) rho_s (I - x* rho_m) rho_t) from {W_s, W_m^dagger, G, W_m, W_t^dagger}.
  double triple(int s, int m, int t, cplx x);
  /// <psi_a|P|psi_a> for the unit-weight string.
  double pauli_direct(int a, const PauliString& pauli);
  /// Tr((I - x rho_j) rho_i (I - x* rho_j) P) from {W_i, W_j^dagger, G, W_j}.
  double pauli_triple(int i, int j, const PauliString& pauli, cplx x);

  /// Throws GaugeUndefined when Tr(rho_a rho_k) is below the tolerance.
  void check_gauge(int k);

  /// Gauge-fixed <psi_i|psi_j>, in which every <psi_a|psi_k> is real and
  /// nonnegative.
  cplx overlap(int i, int j);
  /// Gauge-fixed <psi_i|P|psi_j> for the unit-weight operator part of P.
  /// Throws UnstableDivision when |<psi_j|psi_i>| is below the tolerance.
  cplx pauli_element(int i, int j, const PauliString& pauli);
  cplx hamiltonian_element(int i, int j, const PauliSum& h);

  /// Overlap and Hamiltonian matrices over the given states.
  PcmRecord reconstruct(const std::vector<int>& states, const PauliSum& h);

  const std::vector<PcmMeasurement>& measurements() const { return log_; }

 private:
  using Key = std::tuple<int, int, int, int, std::uint64_t, std::uint64_t>;

  double measure(const Key& key, const Circuit& circuit, const PauliString* pauli,
                 PcmMeasurement entry);
  std::uint64_t x_key(cplx x) const;
  Circuit phase_gate(cplx x) const;
  const Circuit& state(int k) const;

  int n_qubits_;
  PcmSettings settings_;
  std::uint64_t seed_;
  std::optional<Circuit> prep_;
  std::vector<Circuit> circuits_;
  int anchor_ = 0;
  std::map<Key, double> memo_;
  std::map<std::pair<int, int>, std::pair<cplx, cplx>> cross_;
  std::map<std::tuple<int, int, std::string>, cplx> pauli_cross_;
  std::vector<PcmMeasurement> log_;
};

/// Session over the config's members with the anchor chosen per settings.
PcmSession make_session(const LcaConfig& config, const LcaParams& params,
                        const PcmSettings& settings, std::uint64_t seed = 0);

double measure_r0i(const LcaConfig& config, const LcaParams& params, int i,
                   const PcmSettings& settings, std::uint64_t seed = 0);
double triple_raw(const LcaConfig& config, const LcaParams& params, int i, int j, cplx x,
                  const PcmSettings& settings, std::uint64_t seed = 0);
cplx solve_cross_overlap(const LcaConfig& config, const LcaParams& params, int i, int j,
                         const PcmSettings& settings, std::uint64_t seed = 0);
double pauli_triple_raw(const LcaConfig& config, const LcaParams& params, int i, int j,
                        const PauliString& pauli, cplx x, const PcmSettings& settings,
                        std::uint64_t seed = 0);
/// Includes the string's weight.
cplx solve_cross_pauli(const LcaConfig& config, const LcaParams& params, int i, int j,
                       const PauliString& pauli, const PcmSettings& settings,
                       std::uint64_t seed = 0);

PcmRecord pcm_matrices(const LcaConfig& config, const LcaParams& params, const PauliSum& h,
                       const PcmSettings& settings, std::uint64_t seed = 0);
double energy_pcm(const LcaConfig& config, const LcaParams& params, const PauliSum& h,
                  const PcmSettings& settings, std::uint64_t seed = 0);

/// arg <psi_a|psi_k> for the exact member states (the gauge the protocol
/// fixes), with a = 0 unless given.
std::vector<double> gauge_phases(const LcaConfig& config, const LcaParams& params, int anchor = 0);

}  // namespace lca
