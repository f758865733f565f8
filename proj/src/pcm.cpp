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

#include "lca/pcm.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>

#include <nlohmann/json.hpp>

#include "lca/error.hpp"
#include "lca/rng.hpp"

namespace lca {
namespace {

enum MeasureKind : int { kOverlap = 1, kTriple = 2, kPauli = 3, kPauliTriple = 4 };

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

PauliString unit(const PauliString& p) { return PauliString(1.0, p.ops); }

nlohmann::json to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void PcmSettings::validate() const {
  for (cplx x : x_values) phase_angle_for(x);
  const cplx det = std::conj(x_values[0]) * x_values[1] - x_values[0] * std::conj(x_values[1]);
  if (std::abs(det) < 1e-12)
    throw DomainError("PCM x values give a singular system");
  if (!(gauge_tolerance > 0.0)) throw DomainError("gauge_tolerance must be positive");
  if (mode == PcmMode::Shots && shots < 1) throw DomainError("shot mode needs shots >= 1");
}

double phase_angle_for(cplx x) {
  const cplx e = 1.0 - x;
  if (std::abs(std::abs(e) - 1.0) > 1e-12)
    throw DomainError("I - x|0><0| is not unitary for x = (" + std::to_string(x.real()) + ", " +
                      std::to_string(x.imag()) + ")");
  const double theta = std::arg(e);
  return theta <= -std::numbers::pi ? theta + 2 * std::numbers::pi : theta;
}

std::pair<cplx, cplx> solve_conjugate_pair(cplx x1, cplx x2, double r1, double r2) {
  const cplx det = std::conj(x1) * x2 - x1 * std::conj(x2);
  if (std::abs(det) < 1e-12) throw DomainError("singular PCM system: x values coincide");
  const cplx a = (r1 * x2 - r2 * x1) / det;
  const cplx b = (std::conj(x1) * r2 - std::conj(x2) * r1) / det;
  return {a, b};
}

std::string PcmRecord::to_json() const {
  nlohmann::json j;
  j["anchor"] = anchor;
  j["r_anchor"] = r_anchor;
  j["cross"] = lca::to_json(cross);
  j["cross_b"] = lca::to_json(cross_b);
  j["S"] = lca::to_json(S);
  j["Hm"] = lca::to_json(Hm);
  auto& pc = j["pauli_cross"] = nlohmann::json::array();
  for (const PauliCross& p : pauli_cross)
    pc.push_back({{"i", p.i}, {"j", p.j}, {"pauli", p.pauli}, {"trace", lca::to_json(p.trace)}});
  auto& ms = j["measurements"] = nlohmann::json::array();
  for (const PcmMeasurement& m : measurements) {
    nlohmann::json e{{"kind", m.kind}, {"states", m.states}, {"value", m.value}};
    if (m.kind == "triple" || m.kind == "pauli_triple") e["x"] = lca::to_json(m.x);
    if (!m.pauli.empty()) e["pauli"] = m.pauli;
    ms.push_back(std::move(e));
  }
  return j.dump(2);
}

PcmSession::PcmSession(int n_qubits, PcmSettings settings, std::uint64_t seed,
                       std::optional<Circuit> prep)
    : n_qubits_(n_qubits), settings_(settings), seed_(seed), prep_(std::move(prep)) {
  settings_.validate();
  if (prep_ && (prep_->n_qubits != n_qubits || !prep_->is_bound()))
    throw ValidationError("PCM preparation circuit must be bound and match the width");
}

int PcmSession::add_member(const Circuit& bound_member) {
  if (bound_member.n_qubits != n_qubits_) throw DimensionError("PCM member width mismatch");
  if (!bound_member.is_bound()) throw ValidationError("PCM member circuit has unbound slots");
  Circuit w(n_qubits_);
  if (prep_) append(w, *prep_);
  append(w, bound_member);
  circuits_.push_back(std::move(w));
  return state_count() - 1;
}

const Circuit& PcmSession::state(int k) const {
  if (k < 0 || k >= state_count())
    throw DomainError("PCM state index " + std::to_string(k) + " out of range");
  return circuits_[static_cast<std::size_t>(k)];
}

std::uint64_t PcmSession::x_key(cplx x) const {
  for (std::size_t k = 0; k < settings_.x_values.size(); ++k)
    if (x == settings_.x_values[k]) return k;
  double parts[2] = {x.real(), x.imag()};
  std::uint64_t bits[2];
  std::memcpy(bits, parts, sizeof bits);
  return derive_seed(bits[0], {bits[1]});
}

Circuit PcmSession::phase_gate(cplx x) const {
  Circuit g(n_qubits_);
  g.add(GateOp::phase_on_zeros(n_qubits_, phase_angle_for(x)));
  return g;
}

double PcmSession::measure(const Key& key, const Circuit& circuit, const PauliString* pauli,
                           PcmMeasurement entry) {
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const StateVector out = run(circuit, StateVector(n_qubits_));
  double exact;
  EstimateKind kind;
  if (pauli) {
    exact = matrix_element(out, out, *pauli).real();
    kind = EstimateKind::PauliExpectation;
  } else {
    exact = prob_all_zeros(out);
    kind = EstimateKind::Probability;
  }
  double value = exact;
  if (settings_.mode == PcmMode::Shots) {
    const auto& [k, a, b, c, xk, lk] = key;
    Rng rng = make_stream(seed_, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(a),
                                  static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(c),
                                  xk, lk});
    value = sample_estimate(exact, kind, settings_.shots, rng);
  }
  entry.value = value;
  log_.push_back(std::move(entry));
  memo_.emplace(key, value);
  return value;
}

double PcmSession::r(int a, int b) {
  if (a == b) {
    state(a);
    return 1.0;
  }
  if (a > b) std::swap(a, b);
  Circuit c(n_qubits_);
  append(c, state(a));
  append(c, adjoint(state(b)));
  return measure({kOverlap, a, b, -1, 0, 0}, c, nullptr,
                 {"overlap", {a, b}, cplx(0.0), "", 0.0});
}

double PcmSession::triple(int s, int m, int t, cplx x) {
  Circuit c(n_qubits_);
  append(c, state(s));
  append(c, adjoint(state(m)));
  append(c, phase_gate(x));
  append(c, state(m));
  append(c, adjoint(state(t)));
  return measure({kTriple, s, m, t, x_key(x), 0}, c, nullptr,
                 {"triple", {s, m, t}, x, "", 0.0});
}

double PcmSession::pauli_direct(int a, const PauliString& pauli) {
  if (pauli.n_qubits() != n_qubits_) throw DimensionError("Pauli string width mismatch");
  if (pauli.is_identity()) return 1.0;
  const PauliString p = unit(pauli);
  const std::string label = p.label();
  return measure({kPauli, a, -1, -1, 0, fnv1a(label)}, state(a), &p,
                 {"pauli", {a}, cplx(0.0), label, 0.0});
}

double PcmSession::pauli_triple(int i, int j, const PauliString& pauli, cplx x) {
  if (pauli.n_qubits() != n_qubits_) throw DimensionError("Pauli string width mismatch");
  const PauliString p = unit(pauli);
  const std::string label = p.label();
  Circuit c(n_qubits_);
  append(c, state(i));
  append(c, adjoint(state(j)));
  append(c, phase_gate(x));
  append(c, state(j));
  if (p.is_identity()) return 1.0;
  return measure({kPauliTriple, i, j, -1, x_key(x), fnv1a(label)}, c, &p,
                 {"pauli_triple", {i, j}, x, label, 0.0});
}

void PcmSession::choose_anchor(int preferred, const std::vector<int>& candidates) {
  state(preferred);
  anchor_ = preferred;
  if (!settings_.reanchor || candidates.size() < 2) return;
  double best = -1.0;
  for (int a : candidates) {
    double worst = 1.0;
    for (int k : candidates)
      if (k != a) worst = std::min(worst, r(a, k));
    if (worst > best) {
      best = worst;
      anchor_ = a;
    }
  }
}

void PcmSession::check_gauge(int k) {
  const double v = r(anchor_, k);
  if (v < settings_.gauge_tolerance)
    throw GaugeUndefined("gauge undefined: overlap of state " + std::to_string(k) +
                         " with anchor " + std::to_string(anchor_) + " is " +
                         std::to_string(v));
}

cplx PcmSession::overlap(int i, int j) {
  if (i == j) {
    state(i);
    return 1.0;
  }
  if (i > j) return std::conj(overlap(j, i));
  check_gauge(i);
  check_gauge(j);
  const int a = anchor_;
  const double rai = r(a, i), raj = r(a, j);
  if (i == a) return std::sqrt(raj);
  if (j == a) return std::sqrt(rai);
  auto it = cross_.find({i, j});
  if (it == cross_.end()) {
    const double rij = r(i, j);
    double rk[2];
    for (int k = 0; k < 2; ++k) {
      const cplx x = settings_.x_values[static_cast<std::size_t>(k)];
      rk[k] = raj + std::norm(x) * rai * rij - triple(a, i, j, x);
    }
    it = cross_.emplace(std::pair{i, j}, solve_conjugate_pair(settings_.x_values[0],
                                                            settings_.x_values[1], rk[0], rk[1]))
             .first;
  }
  const auto& [A, B] = it->second;
  return 0.5 * (A + std::conj(B)) / (std::sqrt(rai) * std::sqrt(raj));
}

cplx PcmSession::pauli_element(int i, int j, const PauliString& pauli) {
  if (pauli.is_identity()) return overlap(i, j);
  if (i == j) return pauli_direct(i, pauli);
  if (i > j) return std::conj(pauli_element(j, i, pauli));
  const std::string label = unit(pauli).label();
  const cplx sij = overlap(i, j);
  if (std::abs(sij) < settings_.gauge_tolerance)
    throw UnstableDivision("near-orthogonal states " + std::to_string(i) + ", " +
                           std::to_string(j) + ": |<psi_j|psi_i>| = " +
                           std::to_string(std::abs(sij)));
  auto it = pauli_cross_.find({i, j, label});
  if (it == pauli_cross_.end()) {
    const double pi = pauli_direct(i, pauli), pj = pauli_direct(j, pauli), rij = r(i, j);
    double rk[2];
    for (int k = 0; k < 2; ++k) {
      const cplx x = settings_.x_values[static_cast<std::size_t>(k)];
      rk[k] = pi + std::norm(x) * rij * pj - pauli_triple(i, j, pauli, x);
    }
    const auto [A, B] =
        solve_conjugate_pair(settings_.x_values[0], settings_.x_values[1], rk[0], rk[1]);
    it = pauli_cross_.emplace(std::tuple{i, j, label}, 0.5 * (B + std::conj(A))).first;
  }
  return it->second / std::conj(sij);
}

cplx PcmSession::hamiltonian_element(int i, int j, const PauliSum& h) {
  cplx s = 0.0;
  for (const PauliString& t : h.terms) s += t.coeff * pauli_element(i, j, t);
  if (i == j) s = s.real();
  return s;
}

PcmRecord PcmSession::reconstruct(const std::vector<int>& states, const PauliSum& h) {
  const auto m = static_cast<Eigen::Index>(states.size());
  PcmRecord rec;
  rec.anchor = anchor_;
  rec.S = Eigen::MatrixXcd::Identity(m, m);
  rec.Hm = Eigen::MatrixXcd::Zero(m, m);
  rec.cross = Eigen::MatrixXcd::Zero(m, m);
  rec.cross_b = Eigen::MatrixXcd::Zero(m, m);
  for (int k : states) check_gauge(k);
  for (Eigen::Index a = 0; a < m; ++a) {
    const int i = states[static_cast<std::size_t>(a)];
    for (Eigen::Index b = a; b < m; ++b) {
      const int j = states[static_cast<std::size_t>(b)];
      const cplx s = overlap(i, j);
      const cplx hm = hamiltonian_element(i, j, h);
      rec.S(a, b) = s;
      rec.S(b, a) = std::conj(s);
      rec.Hm(a, b) = hm;
      rec.Hm(b, a) = std::conj(hm);
    }
  }
  for (int k = 0; k < state_count(); ++k) rec.r_anchor.push_back(r(anchor_, k));
  for (Eigen::Index a = 0; a < m; ++a) {
    const int i = states[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < m; ++b) {
      const int j = states[static_cast<std::size_t>(b)];
      const double norm = std::sqrt(r(anchor_, i) * r(anchor_, j));
      if (auto it = cross_.find({std::min(i, j), std::max(i, j)}); it != cross_.end()) {
        auto [A, B] = it->second;
        if (i > j) {
          A = std::conj(A);
          B = std::conj(B);
        }
        rec.cross(a, b) = A;
        rec.cross_b(a, b) = B;
      } else {
        // Pairs touching the anchor or the diagonal are fixed directly.
        rec.cross(a, b) = rec.S(a, b) * norm;
        rec.cross_b(a, b) = std::conj(rec.cross(a, b));
      }
    }
  }
  for (const auto& [key, trace] : pauli_cross_) {
    const auto& [i, j, label] = key;
    rec.pauli_cross.push_back({i, j, label, trace});
  }
  rec.measurements = log_;
  return rec;
}

PcmSession make_session(const LcaConfig& config, const LcaParams& params,
                        const PcmSettings& settings, std::uint64_t seed) {
  config.validate();
  params.validate(config);
  if (config.reference.kind != ReferenceSpec::Kind::AllZeros && !config.reference_prep)
    throw ValidationError(
        "the overlap protocol needs an all-zeros reference or a preparation circuit");
  PcmSession session(config.n_qubits, settings, seed, config.reference_prep);
  std::vector<int> all;
  for (int i = 0; i < config.size(); ++i)
    all.push_back(session.add_member(
        lca::bind(config.members[static_cast<std::size_t>(i)], params.thetas[static_cast<std::size_t>(i)])));
  session.choose_anchor(0, all);
  return session;
}

double measure_r0i(const LcaConfig& config, const LcaParams& params, int i,
                   const PcmSettings& settings, std::uint64_t seed) {
  PcmSession s = make_session(config, params, settings, seed);
  return s.r(s.anchor(), i);
}

double triple_raw(const LcaConfig& config, const LcaParams& params, int i, int j, cplx x,
                  const PcmSettings& settings, std::uint64_t seed) {
  PcmSession s = make_session(config, params, settings, seed);
  return s.triple(s.anchor(), i, j, x);
}

cplx solve_cross_overlap(const LcaConfig& config, const LcaParams& params, int i, int j,
                         const PcmSettings& settings, std::uint64_t seed) {
  PcmSession s = make_session(config, params, settings, seed);
  return s.overlap(i, j);
}

double pauli_triple_raw(const LcaConfig& config, const LcaParams& params, int i, int j,
                        const PauliString& pauli, cplx x, const PcmSettings& settings,
                        std::uint64_t seed) {
  PcmSession s = make_session(config, params, settings, seed);
  return s.pauli_triple(i, j, pauli, x);
}

cplx solve_cross_pauli(const LcaConfig& config, const LcaParams& params, int i, int j,
                       const PauliString& pauli, const PcmSettings& settings,
                       std::uint64_t seed) {
  PcmSession s = make_session(config, params, settings, seed);
  return pauli.coeff * s.pauli_element(i, j, pauli);
}

PcmRecord pcm_matrices(const LcaConfig& config, const LcaParams& params, const PauliSum& h,
                       const PcmSettings& settings, std::uint64_t seed) {
  PcmSession s = make_session(config, params, settings, seed);
  std::vector<int> all(static_cast<std::size_t>(config.size()));
  for (int i = 0; i < config.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  return s.reconstruct(all, h);
}

double energy_pcm(const LcaConfig& config, const LcaParams& params, const PauliSum& h,
                  const PcmSettings& settings, std::uint64_t seed) {
  const PcmRecord rec = pcm_matrices(config, params, h, settings, seed);
  return rayleigh_quotient(params.c, rec.Hm, rec.S);
}

std::vector<double> gauge_phases(const LcaConfig& config, const LcaParams& params, int anchor) {
  const auto states = member_states(config, params);
  if (anchor < 0 || anchor >= config.size()) throw DomainError("anchor out of range");
  std::vector<double> out;
  for (const StateVector& s : states)
    out.push_back(std::arg(inner(states[static_cast<std::size_t>(anchor)], s)));
  return out;
}

}  // namespace lca
