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

#include "lca/lca.hpp"

#include <cmath>
#include <string>

#include "lca/error.hpp"
#include "lca/templates.hpp"

namespace lca {

LcaConfig LcaConfig::from_library(const AnsatzLibrary& library, std::span<const int> ids,
                                  int n_qubits, int layers, ReferenceSpec reference) {
  LcaConfig cfg;
  cfg.n_qubits = n_qubits;
  cfg.reference = std::move(reference);
  for (int id : ids) {
    cfg.members.push_back(library.instantiate(id, n_qubits, layers));
    cfg.ids.push_back(id);
  }
  cfg.validate();
  return cfg;
}

void LcaConfig::validate() const {
  if (members.empty()) throw ValidationError("LCA config needs at least one member");
  for (const Circuit& m : members)
    if (m.n_qubits != n_qubits)
      throw ValidationError("LCA members must share the qubit count " + std::to_string(n_qubits));
  if (!member_phases.empty() && member_phases.size() != members.size())
    throw ValidationError("member_phases must be empty or hold one entry per member");
  for (double b : member_phases)
    if (!std::isfinite(b)) throw ValidationError("member phase is not finite");
  if (reference_prep) {
    if (reference_prep->n_qubits != n_qubits || !reference_prep->is_bound())
      throw ValidationError("reference_prep must be a bound circuit on the member width");
  }
}

void LcaParams::validate(const LcaConfig& config) const {
  if (c.size() != config.size())
    throw ValidationError("coefficient vector has " + std::to_string(c.size()) +
                          " entries for " + std::to_string(config.size()) + " members");
  if (thetas.size() != config.members.size())
    throw ValidationError("one angle vector per member is required");
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (!std::isfinite(c[i].real()) || !std::isfinite(c[i].imag()))
      throw ValidationError("coefficient is not finite");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (static_cast<int>(thetas[i].size()) != config.members[i].param_count)
      throw ValidationError("member " + std::to_string(i) + " expects " +
                            std::to_string(config.members[i].param_count) + " angles, got " +
                            std::to_string(thetas[i].size()));
    for (double t : thetas[i])
      if (!std::isfinite(t)) throw ValidationError("angle is not finite");
  }
}

StateVector reference_state(const LcaConfig& config) {
  if (config.reference_prep) return run(*config.reference_prep, StateVector(config.n_qubits));
  return init_reference(config.n_qubits, config.reference);
}

StateVector member_state(const LcaConfig& config, const LcaParams& params, int i) {
  if (i < 0 || i >= config.size())
    throw DomainError("member index " + std::to_string(i) + " out of range");
  const auto idx = static_cast<std::size_t>(i);
  StateVector s = run(lca::bind(config.members[idx], params.thetas.at(idx)), reference_state(config));
  if (!config.member_phases.empty()) {
    const cplx ph = std::polar(1.0, -config.member_phases[idx]);
    for (cplx& a : s.amps) a *= ph;
  }
  return s;
}

std::vector<StateVector> member_states(const LcaConfig& config, const LcaParams& params) {
  params.validate(config);
  std::vector<StateVector> out;
  out.reserve(config.members.size());
  for (int i = 0; i < config.size(); ++i) out.push_back(member_state(config, params, i));
  return out;
}

OverlapMatrices matrices_from_states(std::span<const StateVector> states, const PauliSum& h) {
  const auto m = static_cast<Eigen::Index>(states.size());
  OverlapMatrices out{Eigen::MatrixXcd(m, m), Eigen::MatrixXcd(m, m)};
  std::vector<StateVector> hs;
  hs.reserve(states.size());
  for (const StateVector& s : states) hs.push_back(apply_sum(s, h));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      cplx s = i == j ? cplx(1.0) : inner(states[a], states[b]);
      cplx hm = inner(states[a], hs[b]);
      if (i == j) {
        s = states[a].norm_squared();
        hm = hm.real();
      }
      out.S(i, j) = s;
      out.S(j, i) = std::conj(s);
      out.Hm(i, j) = hm;
      out.Hm(j, i) = std::conj(hm);
    }
  }
  return out;
}

OverlapMatrices build_matrices(const LcaConfig& config, const LcaParams& params,
                               const PauliSum& h) {
  const auto states = member_states(config, params);
  return matrices_from_states(states, h);
}

double normalization(const Eigen::VectorXcd& c, const Eigen::MatrixXcd& S) {
  if (c.size() != S.rows() || S.rows() != S.cols())
    throw DimensionError("normalization: coefficient and Gram sizes differ");
  const double omega2 = c.dot(S * c).real();
  if (!(omega2 >= kDegeneracyThreshold))
    throw DegenerateCombination("degenerate combination: c^dagger S c = " +
                                std::to_string(omega2));
  return omega2;
}

double rayleigh_quotient(const Eigen::VectorXcd& c, const Eigen::MatrixXcd& Hm,
                         const Eigen::MatrixXcd& S) {
  const double d = normalization(c, S);
  if (Hm.rows() != S.rows() || Hm.cols() != S.cols())
    throw DimensionError("rayleigh_quotient: matrix sizes differ");
  return c.dot(Hm * c).real() / d;
}

StateVector combine(std::span<const StateVector> states, const Eigen::VectorXcd& c) {
  if (states.empty() || static_cast<Eigen::Index>(states.size()) != c.size())
    throw DimensionError("combine: one coefficient per state is required");
  StateVector out(states[0].n_qubits, std::vector<cplx>(states[0].dim()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const cplx ci = c[static_cast<Eigen::Index>(i)];
    for (std::size_t k = 0; k < out.dim(); ++k) out.amps[k] += ci * states[i].amps[k];
  }
  const double n2 = out.norm_squared();
  if (!(n2 >= kDegeneracyThreshold))
    throw DegenerateCombination("degenerate combination: norm^2 = " + std::to_string(n2));
  const double inv = 1.0 / std::sqrt(n2);
  for (cplx& a : out.amps) a *= inv;
  return out;
}

StateVector combined_state(const LcaConfig& config, const LcaParams& params) {
  const auto states = member_states(config, params);
  return combine(states, params.c);
}

double energy_exact(const LcaConfig& config, const LcaParams& params, const PauliSum& h) {
  const OverlapMatrices m = build_matrices(config, params, h);
  return rayleigh_quotient(params.c, m.Hm, m.S);
}

LcaParams gauge_transform(const LcaParams& params, std::span<const double> alphas) {
  if (static_cast<Eigen::Index>(alphas.size()) != params.c.size())
    throw DimensionError("gauge_transform: one phase per coefficient is required");
  LcaParams out = params;
  for (Eigen::Index i = 0; i < out.c.size(); ++i)
    out.c[i] *= std::polar(1.0, alphas[static_cast<std::size_t>(i)]);
  return out;
}

OptimalCoefficients optimal_coefficients(const Eigen::MatrixXcd& Hm, const Eigen::MatrixXcd& S) {
  if (S.rows() != S.cols() || Hm.rows() != S.rows() || Hm.cols() != S.cols())
    throw DimensionError("optimal_coefficients: matrix sizes differ");
  const Eigen::MatrixXcd Sh = (S + S.adjoint()) / 2.0;
  const Eigen::MatrixXcd Hh = (Hm + Hm.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Sh);
  const double smax = es.eigenvalues().maxCoeff();
  if (!(smax > kDegeneracyThreshold)) throw DegenerateCombination("Gram matrix is zero");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < Sh.rows(); ++k)
    if (es.eigenvalues()(k) > 1e-10 * smax) keep.push_back(k);
  // Whitened basis W with W^dagger S W = I on the range of S.
  Eigen::MatrixXcd W(Sh.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r)
    W.col(static_cast<Eigen::Index>(r)) =
        es.eigenvectors().col(keep[r]) / std::sqrt(es.eigenvalues()(keep[r]));
  const Eigen::MatrixXcd reduced = W.adjoint() * Hh * W;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> red((reduced + reduced.adjoint()) / 2.0);
  OptimalCoefficients out;
  out.energy = red.eigenvalues()(0);
  out.c = W * red.eigenvectors().col(0);
  return out;
}

}  // namespace lca
