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

#include "lca/vqe.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lca/error.hpp"
#include "lca/expressibility.hpp"
#include "lca/rng.hpp"

namespace lca {
namespace {

constexpr cplx kI{0.0, 1.0};

void add_if_nonzero(PauliSum& h, double w, std::vector<std::pair<int, PauliOp>> ops) {
  if (w == 0.0) return;
  PauliString p = PauliString::identity(h.n_qubits);
  p.coeff = w;
  for (auto [q, op] : ops) p.set(q, op);
  h.add(std::move(p));
}

// Derivative rows for one angle of member i: D_j = <d psi_i|psi_j> and
// DH_j = <d psi_i|H|psi_j> over all members j.
struct DerivRows {
  Eigen::VectorXcd d;
  Eigen::VectorXcd dh;
};

// Quotient-rule derivative of the energy from the derivative rows of member i.
double quotient_derivative(const Eigen::VectorXcd& c, int i, const DerivRows& rows, double num,
                           double den) {
  const cplx ci = std::conj(c[i]);
  cplx sh = 0.0, ss = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    sh += rows.dh[j] * c[j];
    ss += rows.d[j] * c[j];
  }
  const double dN = 2.0 * (ci * sh).real();
  const double dD = 2.0 * (ci * ss).real();
  return (dN - (num / den) * dD) / den;
}

std::vector<double> grad_theta_exact(const LcaConfig& config, const LcaParams& params,
                                     const PauliSum& h) {
  const auto states = member_states(config, params);
  std::vector<StateVector> hs;
  for (const StateVector& s : states) hs.push_back(apply_sum(s, h));
  const OverlapMatrices m = matrices_from_states(states, h);
  const double num = params.c.dot(m.Hm * params.c).real();
  const double den = normalization(params.c, m.S);
  const StateVector ref = reference_state(config);
  const auto M = static_cast<Eigen::Index>(config.size());

  std::vector<double> out;
  for (int i = 0; i < config.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Circuit bound = lca::bind(config.members[ui], params.thetas[ui]);
    const cplx beta = config.member_phases.empty()
                          ? cplx(1.0)
                          : std::polar(1.0, -config.member_phases[ui]);
    for (int l = 0; l < bound.param_count; ++l) {
      DerivRows rows{Eigen::VectorXcd::Zero(M), Eigen::VectorXcd::Zero(M)};
      for (const DerivativeCircuit& dc : insert_generator(bound, l)) {
        StateVector chi = run(dc.circuit, ref);
        const cplx w = std::conj(dc.scalar * beta);
        for (Eigen::Index j = 0; j < M; ++j) {
          rows.d[j] += w * inner(chi, states[static_cast<std::size_t>(j)]);
          rows.dh[j] += w * inner(chi, hs[static_cast<std::size_t>(j)]);
        }
      }
      out.push_back(quotient_derivative(params.c, i, rows, num, den));
    }
  }
  return out;
}

// Gauge-fixed derivative rows of every angle, assembled from the protocol.
struct PcmDerivatives {
  PcmRecord record;
  std::vector<std::pair<int, DerivRows>> rows;  // (member, rows) per angle
};

PcmDerivatives pcm_derivatives(const LcaConfig& config, const LcaParams& params,
                               const PauliSum& h, const Evaluator& eval) {
  PcmSession session = make_session(config, params, eval.pcm, eval.seed);
  const int M = config.size();
  std::vector<int> members(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) members[static_cast<std::size_t>(i)] = i;
  PcmDerivatives out{session.reconstruct(members, h), {}};
  const Eigen::MatrixXcd& S = out.record.S;
  const Eigen::MatrixXcd& Hm = out.record.Hm;

  for (int i = 0; i < M; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Circuit bound = lca::bind(config.members[ui], params.thetas[ui]);
    for (int l = 0; l < bound.param_count; ++l) {
      const std::size_t g = bound.gate_of_slot(l);
      DerivRows rows{Eigen::VectorXcd::Zero(M), Eigen::VectorXcd::Zero(M)};
      for (const GeneratorTerm& term : generator_of(bound.gates[g], config.n_qubits)) {
        // sigma_s = (psi_i - i s chi) / sqrt 2, with chi the Pauli-inserted state.
        // Of the two signs, r(a, sigma_+) + r(a, sigma_-) >= r(a, i); the
        // larger one keeps the gauge of sigma well defined.
        int sigma_of[2];
        for (int k = 0; k < 2; ++k) {
          const double angle = (k == 0 ? 1.0 : -1.0) * std::numbers::pi / 2;
          Circuit shifted(config.n_qubits);
          shifted.gates.assign(bound.gates.begin(),
                               bound.gates.begin() + static_cast<std::ptrdiff_t>(g) + 1);
          for (GateOp& op : pauli_rotation_gates(term.pauli, angle))
            shifted.gates.push_back(std::move(op));
          shifted.gates.insert(shifted.gates.end(),
                               bound.gates.begin() + static_cast<std::ptrdiff_t>(g) + 1,
                               bound.gates.end());
          for (GateOp& op : shifted.gates) op.slot.reset();
          sigma_of[k] = session.add_member(shifted);
        }
        const int a = session.anchor();
        const bool plus = session.r(a, sigma_of[0]) >= session.r(a, sigma_of[1]);
        const int sigma = sigma_of[plus ? 0 : 1];
        const double sgn = plus ? 1.0 : -1.0;
        const int pre = session.add_member(prefix(bound, g + 1));
        const double pk = session.pauli_direct(pre, term.pauli);

        const cplx true_overlap = (1.0 - sgn * kI * pk) / std::sqrt(2.0);
        cplx omega = session.overlap(i, sigma) / true_overlap;
        omega /= std::abs(omega);
        const cplx w = std::conj(term.scalar);
        for (int j = 0; j < M; ++j) {
          const cplx chi_j =
              sgn * kI * (S(i, j) - std::sqrt(2.0) * omega * session.overlap(sigma, j));
          const cplx chi_hj = sgn * kI *
                              (Hm(i, j) - std::sqrt(2.0) * omega *
                                              session.hamiltonian_element(sigma, j, h));
          rows.d[j] += w * chi_j;
          rows.dh[j] += w * chi_hj;
        }
      }
      out.rows.emplace_back(i, std::move(rows));
    }
  }
  return out;
}

}  // namespace

PauliSum xy_hamiltonian(const XYModelSpec& spec) {
  if (spec.n_sites < 2) throw DomainError("XY model needs N >= 2");
  const int n = spec.n_sites;
  PauliSum h(n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    add_if_nonzero(h, spec.j_xx, {{i, PauliOp::X}, {j, PauliOp::X}});
    add_if_nonzero(h, spec.j_yy, {{i, PauliOp::Y}, {j, PauliOp::Y}});
  }
  for (int i = 0; i < n; ++i) add_if_nonzero(h, spec.j_x, {{i, PauliOp::X}});
  for (int i = 0; i < n; ++i) add_if_nonzero(h, spec.j_z, {{i, PauliOp::Z}});
  return h;
}

std::string_view to_string(CostMode m) { return m == CostMode::Exact ? "exact" : "pcm"; }

CostMode cost_mode_from_string(std::string_view name) {
  if (name == "exact" || name == "EXACT") return CostMode::Exact;
  if (name == "pcm" || name == "PCM") return CostMode::Pcm;
  throw ParseError("unknown mode '" + std::string(name) + "'");
}

double cost(const LcaConfig& config, const LcaParams& params, const PauliSum& h,
            const Evaluator& eval) {
  if (eval.mode == CostMode::Exact) return energy_exact(config, params, h);
  return energy_pcm(config, params, h, eval.pcm, eval.seed);
}

Eigen::VectorXd grad_c_from_matrices(const Eigen::VectorXcd& c, const Eigen::MatrixXcd& Hm,
                                     const Eigen::MatrixXcd& S) {
  const double den = normalization(c, S);
  const double e = c.dot(Hm * c).real() / den;
  // The Hermitian part carries the whole quadratic form.
  const Eigen::VectorXcd hc = 0.5 * (Hm + Hm.adjoint()) * c;
  const Eigen::VectorXcd sc = 0.5 * (S + S.adjoint()) * c;
  const auto M = c.size();
  Eigen::VectorXd g(2 * M);
  for (Eigen::Index k = 0; k < M; ++k) {
    g[k] = 2.0 * (hc[k].real() - e * sc[k].real()) / den;
    g[M + k] = 2.0 * (hc[k].imag() - e * sc[k].imag()) / den;
  }
  return g;
}

Eigen::VectorXd grad_c(const LcaConfig& config, const LcaParams& params, const PauliSum& h,
                       const Evaluator& eval) {
  if (eval.mode == CostMode::Exact) {
    const OverlapMatrices m = build_matrices(config, params, h);
    return grad_c_from_matrices(params.c, m.Hm, m.S);
  }
  const PcmRecord rec = pcm_matrices(config, params, h, eval.pcm, eval.seed);
  return grad_c_from_matrices(params.c, rec.Hm, rec.S);
}

std::vector<double> grad_theta_frozen(const LcaConfig& config, const LcaParams& params,
                                      const PauliSum& h, const Evaluator& eval) {
  if (eval.mode == CostMode::Exact) return grad_theta_exact(config, params, h);
  const PcmDerivatives pd = pcm_derivatives(config, params, h, eval);
  const double num = params.c.dot(pd.record.Hm * params.c).real();
  const double den = normalization(params.c, pd.record.S);
  std::vector<double> out;
  for (const auto& [i, rows] : pd.rows) out.push_back(quotient_derivative(params.c, i, rows, num, den));
  return out;
}

std::vector<double> grad_theta(const LcaConfig& config, const LcaParams& params,
                               const PauliSum& h, const Evaluator& eval) {
  if (eval.mode == CostMode::Exact) return grad_theta_exact(config, params, h);
  const PcmDerivatives pd = pcm_derivatives(config, params, h, eval);
  const Eigen::VectorXcd& c = params.c;
  const double num = c.dot(pd.record.Hm * c).real();
  const double den = normalization(c, pd.record.S);
  const Eigen::VectorXd gc = grad_c_from_matrices(c, pd.record.Hm, pd.record.S);
  const auto M = c.size();
  const int a = pd.record.anchor;
  // dE/d alpha_k at fixed c: alpha_k enters only through c_k e^{-i alpha_k}.
  auto de_dalpha = [&](Eigen::Index k) {
    return gc[k] * c[k].imag() - gc[M + k] * c[k].real();
  };
  std::vector<double> out;
  for (const auto& [i, rows] : pd.rows) {
    double g = quotient_derivative(c, i, rows, num, den);
    if (i != a) {
      const double sq = std::abs(pd.record.S(i, a));
      g += -rows.d[a].imag() / sq * de_dalpha(i);
    } else {
      for (Eigen::Index k = 0; k < M; ++k) {
        if (k == a) continue;
        const double sq = std::abs(pd.record.S(a, k));
        g += rows.d[k].imag() / sq * de_dalpha(k);
      }
    }
    out.push_back(g);
  }
  return out;
}

std::vector<double> flatten(const LcaParams& p) {
  std::vector<double> out;
  for (Eigen::Index k = 0; k < p.c.size(); ++k) out.push_back(p.c[k].real());
  for (Eigen::Index k = 0; k < p.c.size(); ++k) out.push_back(p.c[k].imag());
  for (const auto& t : p.thetas) out.insert(out.end(), t.begin(), t.end());
  return out;
}

LcaParams unflatten(const LcaConfig& config, std::span<const double> flat) {
  const auto M = static_cast<std::size_t>(config.size());
  std::size_t need = 2 * M;
  for (const Circuit& m : config.members) need += static_cast<std::size_t>(m.param_count);
  if (flat.size() != need)
    throw DimensionError("unflatten: expected " + std::to_string(need) + " values, got " +
                         std::to_string(flat.size()));
  LcaParams p;
  p.c.resize(static_cast<Eigen::Index>(M));
  for (std::size_t k = 0; k < M; ++k) p.c[static_cast<Eigen::Index>(k)] = {flat[k], flat[M + k]};
  std::size_t pos = 2 * M;
  for (const Circuit& m : config.members) {
    const auto n = static_cast<std::size_t>(m.param_count);
    p.thetas.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                          flat.begin() + static_cast<std::ptrdiff_t>(pos + n));
    pos += n;
  }
  return p;
}

LcaParams initial_params(const LcaConfig& config, std::uint64_t seed) {
  LcaParams p;
  p.c = Eigen::VectorXcd::Ones(config.size());
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < config.size(); ++i) {
    Rng rng = make_stream(seed, {0x7468657461ULL, static_cast<std::uint64_t>(i)});
    std::vector<double> t(static_cast<std::size_t>(config.members[static_cast<std::size_t>(i)].param_count));
    for (double& x : t) x = u(rng);
    p.thetas.push_back(std::move(t));
  }
  return p;
}

TrainTrace train(const LcaConfig& config, const PauliSum& h, const OptimizerConfig& opt,
                 const LcaParams& initial) {
  if (!std::isfinite(opt.learning_rate) || opt.learning_rate < 0.0)
    throw DomainError("learning rate must be finite and nonnegative");
  if (opt.steps < 0) throw DomainError("steps must be nonnegative");
  config.validate();
  initial.validate(config);
  TrainTrace trace;
  LcaParams p = initial;
  for (int step = 0;; ++step) {
    Evaluator ev = opt.eval;
    ev.seed = derive_seed(opt.eval.seed, {static_cast<std::uint64_t>(step)});
    try {
      trace.energies.push_back(cost(config, p, h, ev));
      if (step == opt.steps) break;
      const Eigen::VectorXd gc = grad_c(config, p, h, ev);
      const std::vector<double> gt = grad_theta(config, p, h, ev);
      std::vector<double> flat = flatten(p);
      double norm2 = 0.0;
      for (Eigen::Index k = 0; k < gc.size(); ++k) {
        flat[static_cast<std::size_t>(k)] -= opt.learning_rate * gc[k];
        norm2 += gc[k] * gc[k];
      }
      for (std::size_t k = 0; k < gt.size(); ++k) {
        flat[static_cast<std::size_t>(gc.size()) + k] -= opt.learning_rate * gt[k];
        norm2 += gt[k] * gt[k];
      }
      trace.grad_norms.push_back(std::sqrt(norm2));
      p = unflatten(config, flat);
    } catch (const DegenerateCombination& e) {
      throw DegenerateCombination("training aborted at step " + std::to_string(step) + ": " +
                                  e.what());
    }
  }
  trace.final_params = p;
  trace.final_energy = trace.energies.back();
  return trace;
}

TrainTrace train(const LcaConfig& config, const PauliSum& h, const OptimizerConfig& opt) {
  return train(config, h, opt, initial_params(config, opt.seed));
}

double improvement_L(double e_lca, std::span<const double> member_energies, double e_ground) {
  if (member_energies.empty()) throw DomainError("improvement_L: empty member list");
  const double mn = *std::min_element(member_energies.begin(), member_energies.end());
  const double gap = std::abs(mn - e_ground);
  if (gap == 0.0) throw DomainError("improvement_L: best member already at the ground energy");
  return (mn - e_lca) / gap;
}

void write_trace_csv(std::ostream& out, const TrainTrace& t) {
  out << "step,energy,grad_norm\n";
  for (std::size_t k = 0; k < t.energies.size(); ++k) {
    out << k << ',' << format_double(t.energies[k]) << ',';
    if (k < t.grad_norms.size()) out << format_double(t.grad_norms[k]);
    out << '\n';
  }
}

}  // namespace lca
