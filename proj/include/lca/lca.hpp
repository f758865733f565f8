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

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lca/circuit.hpp"
#include "lca/pauli.hpp"
#include "lca/statevector.hpp"

namespace lca {

class AnsatzLibrary;

/// Member circuits of a linear combination of ansatzes acting on a shared
/// reference state.
///
/// The reference is either `reference` directly or, when `reference_prep`
/// is set, the bound preparation circuit applied to |0...0>. The ancilla-free
/// overlap protocol needs the latter form for references other than all-zeros.
/// `member_phases` (empty or one entry per member) multiplies member i by
/// e^{-i beta_i}; it models the unobservable phase convention of a member.
struct LcaConfig {
  int n_qubits = 0;
  std::vector<Circuit> members;
  std::vector<int> ids;
  ReferenceSpec reference;
  std::optional<Circuit> reference_prep;
  std::vector<double> member_phases;

  static LcaConfig from_library(const AnsatzLibrary& library, std::span<const int> ids,
                                int n_qubits, int layers, ReferenceSpec reference = {});

  int size() const { return static_cast<int>(members.size()); }
  /// Throws ValidationError on an empty set, mixed widths or bad phases.
  void validate() const;
};

/// Trainable parameters: complex coefficients and one angle vector per member.
struct LcaParams {
  Eigen::VectorXcd c;
  std::vector<std::vector<double>> thetas;

  /// Throws ValidationError when lengths disagree with the config or any
  /// entry is non-finite.
  void validate(const LcaConfig& config) const;
};

struct OverlapMatrices {
  Eigen::MatrixXcd S;
  Eigen::MatrixXcd Hm;
};

/// Threshold on c^dagger S c below which a combination is degenerate.
inline constexpr double kDegeneracyThreshold = 1e-10;

StateVector reference_state(const LcaConfig& config);

/// e^{-i beta_i} U^i(theta^i) |phi_0>. Throws DomainError when i is out of range.
StateVector member_state(const LcaConfig& config, const LcaParams& params, int i);
std::vector<StateVector> member_states(const LcaConfig& config, const LcaParams& params);

OverlapMatrices matrices_from_states(std::span<const StateVector> states, const PauliSum& h);
OverlapMatrices build_matrices(const LcaConfig& config, const LcaParams& params,
                               const PauliSum& h);

/// c^dagger S c. Throws DegenerateCombination below kDegeneracyThreshold.
double normalization(const Eigen::VectorXcd& c, const Eigen::MatrixXcd& S);

/// (c^dagger Hm c) / (c^dagger S c).
double rayleigh_quotient(const Eigen::VectorXcd& c, const Eigen::MatrixXcd& Hm,
                         const Eigen::MatrixXcd& S);

/// Coefficient-weighted sum of member states, normalized.
StateVector combine(std::span<const StateVector> states, const Eigen::VectorXcd& c);
StateVector combined_state(const LcaConfig& config, const LcaParams& params);

double energy_exact(const LcaConfig& config, const LcaParams& params, const PauliSum& h);

/// c_i -> c_i e^{i alpha_i}; thetas unchanged.
LcaParams gauge_transform(const LcaParams& params, std::span<const double> alphas);

struct OptimalCoefficients {
  double energy;
  Eigen::VectorXcd c;
};

/// Minimizes the Rayleigh quotient over c at fixed matrices by solving the
/// generalized eigenproblem on the range of S.
OptimalCoefficients optimal_coefficients(const Eigen::MatrixXcd& Hm, const Eigen::MatrixXcd& S);

}  // namespace lca
