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
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lca/lca.hpp"
#include "lca/pauli.hpp"
#include "lca/pcm.hpp"

namespace lca {

/// Periodic XY chain with transverse fields:
/// sum_i (J_xx X_i X_{i+1} + J_yy Y_i Y_{i+1}) + J_x sum X_i + J_z sum Z_i.
struct XYModelSpec {
  int n_sites = 4;
  double j_xx = 1.0;
  double j_yy = 1.0;
  double j_x = 0.5;
  double j_z = 0.5;
};

/// Terms with zero weight are omitted. At N = 2 the bond appears twice,
/// once per ring direction. Throws DomainError for N < 2.
PauliSum xy_hamiltonian(const XYModelSpec& spec);

enum class CostMode { Exact, Pcm };
std::string_view to_string(CostMode m);
CostMode cost_mode_from_string(std::string_view name);

/// How energies and gradients are evaluated. In PCM mode every quantity is
/// assembled from the ancilla-free measurement protocol; with shot settings
/// the session seed selects the measurement noise.
struct Evaluator {
  CostMode mode = CostMode::Exact;
  PcmSettings pcm;
  std::uint64_t seed = 0;
};

double cost(const LcaConfig& config, const LcaParams& params, const PauliSum& h,
            const Evaluator& eval = {});

/// Gradient of (c^dagger Hm c)/(c^dagger S c) laid out as
/// [d/dRe c_0 .. d/dRe c_{M-1}, d/dIm c_0 .. d/dIm c_{M-1}].
Eigen::VectorXd grad_c_from_matrices(const Eigen::VectorXcd& c, const Eigen::MatrixXcd& Hm,
                                     const Eigen::MatrixXcd& S);
Eigen::VectorXd grad_c(const LcaConfig& config, const LcaParams& params, const PauliSum& h,
                       const Evaluator& eval = {});

/// Derivative of cost() with respect to every angle, members concatenated.
/// In PCM mode this includes the drift of the gauge phases with theta, so
/// it is the gradient of the estimated energy. Throws UnsupportedGenerator
/// when a parameterized gate is not generated by a Pauli string.
std::vector<double> grad_theta(const LcaConfig& config, const LcaParams& params,
                               const PauliSum& h, const Evaluator& eval = {});

/// The quotient-rule gradient with the gauge held fixed. In PCM mode this
/// equals the exact gradient at the gauge-transformed coefficients; in
/// exact mode it equals grad_theta.
std::vector<double> grad_theta_frozen(const LcaConfig& config, const LcaParams& params,
                                      const PauliSum& h, const Evaluator& eval = {});

/// Flattened layout [Re c, Im c, theta^0, theta^1, ...].
std::vector<double> flatten(const LcaParams& params);
LcaParams unflatten(const LcaConfig& config, std::span<const double> flat);

/// theta uniform on [0, 2 pi) from the stream (seed, member), c_i = 1.
LcaParams initial_params(const LcaConfig& config, std::uint64_t seed);

struct OptimizerConfig {
  double learning_rate = 0.05;
  int steps = 2000;
  Evaluator eval;
  std::uint64_t seed = 0;
};

struct TrainTrace {
  std::vector<double> energies;    // steps + 1 entries, before each update and final
  std::vector<double> grad_norms;  // steps entries
  LcaParams final_params;
  double final_energy = 0.0;
};

/// Plain gradient descent on {Re c, Im c, theta}. Throws DomainError on a
/// nonpositive or non-finite learning rate (zero is allowed) and
/// DegenerateCombination, naming the step, when the combination collapses.
TrainTrace train(const LcaConfig& config, const PauliSum& h, const OptimizerConfig& opt,
                 const LcaParams& initial);
TrainTrace train(const LcaConfig& config, const PauliSum& h, const OptimizerConfig& opt);

/// (Min - e_lca) / |Min - e_ground| over the member energies. Throws
/// DomainError on an empty list or a zero gap.
double improvement_L(double e_lca, std::span<const double> member_energies, double e_ground);

/// Writes step,energy,grad_norm rows; the final row has an empty grad_norm.
void write_trace_csv(std::ostream& out, const TrainTrace& trace);

}  // namespace lca
