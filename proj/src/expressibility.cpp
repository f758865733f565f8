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

#include "lca/expressibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include "lca/error.hpp"
#include "lca/parallel.hpp"
#include "lca/templates.hpp"

namespace lca {
namespace {

void check_dim(double dim) {
  if (!(dim >= 2.0)) throw DomainError("Haar distribution needs dimension N >= 2");
}

std::vector<double> sample_angles(Rng& rng, int count, double range) {
  std::uniform_real_distribution<double> u(0.0, range);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (double& t : out) t = u(rng);
  return out;
}

cplx sample_coefficient(Rng& rng, CoefficientMode mode) {
  if (mode == CoefficientMode::FixedOnes) return 1.0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  const double im = u(rng);
  return {re, im};
}

// Member states of one side for a given key, plus their coefficients.
struct SideDraw {
  std::vector<StateVector> states;
  std::vector<cplx> coeffs;
};

SideDraw draw_members(const LcaConfig& cfg, const StateVector& ref, std::uint64_t key,
                      double range, CoefficientMode mode) {
  SideDraw d;
  for (int m = 0; m < cfg.size(); ++m) {
    const Circuit& member = cfg.members[static_cast<std::size_t>(m)];
    Rng rng = make_stream(key, {static_cast<std::uint64_t>(m)});
    const auto angles = sample_angles(rng, member.param_count, range);
    d.coeffs.push_back(sample_coefficient(rng, mode));
    StateVector s = run(lca::bind(member, angles), ref);
    if (!cfg.member_phases.empty()) {
      const cplx ph = std::polar(1.0, -cfg.member_phases[static_cast<std::size_t>(m)]);
      for (cplx& a : s.amps) a *= ph;
    }
    d.states.push_back(std::move(s));
  }
  return d;
}

// Normalized prefix sums sum_{m < M} c_m psi_m for M = 1..size; empty
// optional marks a degenerate prefix.
std::vector<std::optional<StateVector>> prefix_combinations(const SideDraw& d) {
  std::vector<std::optional<StateVector>> out;
  StateVector acc(d.states[0].n_qubits, std::vector<cplx>(d.states[0].dim()));
  for (std::size_t m = 0; m < d.states.size(); ++m) {
    for (std::size_t k = 0; k < acc.dim(); ++k) acc.amps[k] += d.coeffs[m] * d.states[m].amps[k];
    const double n2 = acc.norm_squared();
    if (!(n2 >= kDegeneracyThreshold)) {
      out.emplace_back();
      continue;
    }
    StateVector s = acc;
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& a : s.amps) a *= inv;
    out.emplace_back(std::move(s));
  }
  return out;
}

constexpr int kMaxResample = 1000;

}  // namespace

std::string_view to_string(Binning b) { return b == Binning::Fixed ? "fixed" : "unfixed"; }

Binning binning_from_string(std::string_view name) {
  if (name == "fixed" || name == "FIXED") return Binning::Fixed;
  if (name == "unfixed" || name == "UNFIXED") return Binning::Unfixed;
  throw ParseError("unknown binning '" + std::string(name) + "'");
}

std::string_view to_string(CoefficientMode m) {
  return m == CoefficientMode::FixedOnes ? "ones" : "sampled";
}

CoefficientMode coefficient_mode_from_string(std::string_view name) {
  if (name == "ones" || name == "FIXED_ONES") return CoefficientMode::FixedOnes;
  if (name == "sampled" || name == "SAMPLED") return CoefficientMode::Sampled;
  throw ParseError("unknown coefficient mode '" + std::string(name) + "'");
}

double haar_pdf(double f, double dim) {
  check_dim(dim);
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("haar_pdf: fidelity outside [0, 1]");
  if (dim == 2.0) return 1.0;
  return (dim - 1.0) * std::pow(1.0 - f, dim - 2.0);
}

double haar_bin_mass(double lo, double hi, double dim) {
  check_dim(dim);
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
    throw DomainError("haar_bin_mass: need 0 <= lo < hi <= 1");
  return std::pow(1.0 - lo, dim - 1.0) - std::pow(1.0 - hi, dim - 1.0);
}

double log_haar_bin_mass(double lo, double hi, double dim) {
  check_dim(dim);
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
    throw DomainError("log_haar_bin_mass: need 0 <= lo < hi <= 1");
  const double a = (dim - 1.0) * std::log1p(-lo);
  const double b = hi >= 1.0 ? -std::numeric_limits<double>::infinity()
                             : (dim - 1.0) * std::log1p(-hi);
  return a + std::log1p(-std::exp(b - a));
}

FidelityHistogram build_histogram(std::span<const double> samples, double dim, Binning binning,
                                  int n_bin) {
  check_dim(dim);
  if (samples.empty()) throw DomainError("histogram needs at least one sample");
  if (n_bin < 2) throw DomainError("histogram needs n_bin >= 2");
  FidelityHistogram h;
  h.binning = binning;
  h.n_bin = n_bin;
  h.total = static_cast<std::int64_t>(samples.size());
  double lo = 0.0, hi = 1.0;
  if (binning == Binning::Unfixed) {
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    lo = std::clamp(*mn, 0.0, 1.0);
    hi = std::clamp(*mx, 0.0, 1.0);
    if (!(hi - lo > 1e-14))
      throw DegenerateRegion("all fidelity samples coincide; unfixed bins have zero width");
  }
  const double width = (hi - lo) / n_bin;
  h.edges.resize(static_cast<std::size_t>(n_bin) + 1);
  for (int k = 0; k <= n_bin; ++k) h.edges[static_cast<std::size_t>(k)] = lo + k * width;
  h.edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(n_bin), 0);
  for (double f : samples) {
    auto k = static_cast<long>(std::floor((std::clamp(f, 0.0, 1.0) - lo) / width));
    k = std::clamp<long>(k, 0, n_bin - 1);
    ++h.counts[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < n_bin; ++k)
    h.log_haar.push_back(log_haar_bin_mass(h.edges[static_cast<std::size_t>(k)],
                                           h.edges[static_cast<std::size_t>(k) + 1], dim));
  return h;
}

double kl_divergence(const FidelityHistogram& h) {
  double d = 0.0;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.counts[k] == 0) continue;
    const double p = static_cast<double>(h.counts[k]) / static_cast<double>(h.total);
    d += p * (std::log(p) - h.log_haar[k]);
  }
  return d;
}

double kl_divergence(std::span<const double> samples, double dim, Binning binning, int n_bin) {
  return kl_divergence(build_histogram(samples, dim, binning, n_bin));
}

double kl_std_error(const FidelityHistogram& h) {
  const double n = static_cast<double>(h.total);
  double d = 0.0, second = 0.0;
  int occupied = 0;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.counts[k] == 0) continue;
    ++occupied;
    const double p = static_cast<double>(h.counts[k]) / n;
    const double l = std::log(p) - h.log_haar[k];
    d += p * l;
    second += p * l * l;
  }
  // The plug-in second moment carries about (K - 1) / n of pure sampling
  // noise, removed before adding the chi-square term.
  const double k1 = occupied - 1;
  const double var = std::max(0.0, (second - d * d) / n - k1 / (n * n)) + k1 / (2.0 * n * n);
  return std::sqrt(var);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_histogram_csv(std::ostream& out, const FidelityHistogram& h) {
  out << "bin_lo,bin_hi,p_est,p_haar\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << format_double(h.edges[k]) << ',' << format_double(h.edges[k + 1]) << ','
        << format_double(static_cast<double>(h.counts[k]) / static_cast<double>(h.total)) << ','
        << format_double(std::exp(h.log_haar[k])) << '\n';
  }
}

std::vector<double> sample_fidelities(const StateSampler& sampler, std::int64_t pairs,
                                      std::uint64_t seed) {
  if (pairs < 1) throw DomainError("sample_fidelities: pairs must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(pairs));
  parallel_for(out.size(), [&](std::size_t p) {
    Rng ra = make_stream(seed, {p, 0});
    Rng rb = make_stream(seed, {p, 1});
    const StateVector a = sampler(ra);
    const StateVector b = sampler(rb);
    out[p] = std::min(1.0, std::norm(inner(a, b)));
  });
  return out;
}

StateSampler circuit_sampler(Circuit circuit, StateVector reference, double angle_range) {
  if (circuit.n_qubits != reference.n_qubits)
    throw DimensionError("circuit_sampler: reference width differs from the circuit");
  return [circuit = std::move(circuit), ref = std::move(reference), angle_range](Rng& rng) {
    return run(lca::bind(circuit, sample_angles(rng, circuit.param_count, angle_range)), ref);
  };
}

StateSampler lca_sampler(LcaConfig config, double angle_range, CoefficientMode c_mode) {
  config.validate();
  StateVector ref = reference_state(config);
  return [cfg = std::move(config), ref = std::move(ref), angle_range, c_mode](Rng& rng) {
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
      const SideDraw d = draw_members(cfg, ref, rng(), angle_range, c_mode);
      auto prefixes = prefix_combinations(d);
      if (prefixes.back()) return std::move(*prefixes.back());
    }
    throw DegenerateCombination("lca_sampler: every draw produced a degenerate combination");
  };
}

ExprResult expr_states(const StateSampler& sampler, int n_qubits, const ExprOptions& o) {
  const double dim = std::ldexp(1.0, n_qubits);
  const auto samples = sample_fidelities(sampler, o.pairs, o.seed);
  ExprResult r;
  r.histogram = build_histogram(samples, dim, o.binning, o.n_bin);
  r.d_kl = kl_divergence(r.histogram);
  r.pairs = o.pairs;
  r.binning = o.binning;
  r.n_bin = o.n_bin;
  r.seed = o.seed;
  return r;
}

ExprResult expr_circuit(const Circuit& circuit, const StateVector& reference,
                        const ExprOptions& o) {
  return expr_states(circuit_sampler(circuit, reference, o.angle_range), circuit.n_qubits, o);
}

ExprResult expr_single(const AnsatzLibrary& library, int id, int n_qubits, int layers,
                       const ExprOptions& o) {
  return expr_circuit(library.instantiate(id, n_qubits, layers), StateVector(n_qubits), o);
}

ExprResult expr_lca(const LcaConfig& config, const ExprOptions& o) {
  return expr_states(lca_sampler(config, o.angle_range, o.c_mode), config.n_qubits, o);
}

ExprResult expr_lca(const AnsatzLibrary& library, std::span<const int> ids, int n_qubits,
                    int layers, const ExprOptions& o) {
  return expr_lca(LcaConfig::from_library(library, ids, n_qubits, layers), o);
}

double improvement_R(double d_lca, std::span<const double> member_d_kls) {
  if (member_d_kls.empty()) throw DomainError("improvement_R: empty member list");
  const double mn = *std::min_element(member_d_kls.begin(), member_d_kls.end());
  if (!(mn > 0.0)) throw DomainError("improvement_R: smallest member d_kl must be positive");
  return (mn - d_lca) / mn;
}

std::vector<ScanRow> depth_scan(const AnsatzLibrary& library, int id, int n_qubits,
                                std::span<const int> layers, const ExprOptions& o) {
  if (layers.empty()) throw DomainError("depth_scan: empty layer range");
  std::vector<ScanRow> rows;
  for (int l : layers) {
    const ExprResult r = expr_single(library, id, n_qubits, l, o);
    rows.push_back({n_qubits, l, r.d_kl, o.seed, 0, kl_std_error(r.histogram)});
  }
  return rows;
}

int threshold_layer(std::span<const ScanRow> rows, double tolerance) {
  if (rows.empty()) throw DomainError("threshold_layer: empty scan");
  const std::size_t n = rows.size();
  const double plateau = n == 1 ? rows[0].d_kl : 0.5 * (rows[n - 1].d_kl + rows[n - 2].d_kl);
  for (const ScanRow& r : rows)
    if (std::abs(r.d_kl - plateau) <= tolerance * plateau) return r.index;
  return rows.back().index;
}

LinearFit fit_threshold(std::span<const std::pair<int, int>> pts) {
  std::vector<int> qs;
  for (const auto& [q, _] : pts) qs.push_back(q);
  std::sort(qs.begin(), qs.end());
  if (std::unique(qs.begin(), qs.end()) - qs.begin() < 2)
    throw DomainError("fit_threshold: need at least two distinct qubit counts");
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [q, l] : pts) {
    sx += q;
    sy += l;
    sxx += static_cast<double>(q) * q;
    sxy += static_cast<double>(q) * l;
  }
  LinearFit f;
  f.a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.b = (sy - f.a * sx) / n;
  return f;
}

int saturation_count(std::span<const double> d, double epsilon) {
  const std::vector<double> zero(d.size(), 0.0);
  return saturation_count(d, zero, epsilon, 0.0);
}

int saturation_count(std::span<const double> d, std::span<const double> se, double epsilon,
                     double z) {
  if (d.empty()) throw DomainError("saturation_count: empty sequence");
  if (se.size() != d.size()) throw DimensionError("saturation_count: one error per value");
  if (z < 0.0) throw DomainError("saturation_count: z must be nonnegative");
  const int max_m = static_cast<int>(d.size());
  int mc = max_m;
  for (int m = max_m; m >= 2; --m) {
    const auto prev = static_cast<std::size_t>(m - 2);
    const auto cur = static_cast<std::size_t>(m - 1);
    const double noise = z * std::hypot(se[prev], se[cur]);
    const bool improved =
        d[prev] > 0.0 && (d[prev] - d[cur] - noise) / d[prev] >= epsilon;
    if (improved) break;
    mc = m - 1;
  }
  return mc;
}

CountScan count_scan(const AnsatzLibrary& library, int n_qubits, int layers, int max_m,
                     int trials, const ExprOptions& o, double epsilon_sat, double z_sat) {
  const std::vector<int> catalog = library.ids();
  if (max_m < 1 || max_m > static_cast<int>(catalog.size()))
    throw DomainError("count_scan: max M must lie in 1.." + std::to_string(catalog.size()));
  if (trials < 1) throw DomainError("count_scan: trials must be >= 1");
  if (o.pairs < 1) throw DomainError("count_scan: pairs must be >= 1");
  const double dim = std::ldexp(1.0, n_qubits);
  CountScan scan;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> order = catalog;
    Rng rng = make_stream(o.seed, {0x6f72646572ULL, static_cast<std::uint64_t>(t)});
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(static_cast<std::size_t>(max_m));
    const LcaConfig cfg = LcaConfig::from_library(library, order, n_qubits, layers);
    const StateVector ref = reference_state(cfg);

    const auto m_count = static_cast<std::size_t>(max_m);
    std::vector<std::vector<double>> fid(m_count,
                                         std::vector<double>(static_cast<std::size_t>(o.pairs)));
    parallel_for(static_cast<std::size_t>(o.pairs), [&](std::size_t p) {
      // Side states per M, each from the first key that is non-degenerate
      // for that prefix, exactly as the single-set sampler would pick.
      std::vector<std::vector<std::optional<StateVector>>> sides[2];
      std::vector<StateVector> chosen[2];
      for (int s = 0; s < 2; ++s) {
        Rng side = make_stream(o.seed, {p, static_cast<std::uint64_t>(s)});
        std::vector<std::vector<std::optional<StateVector>>> draws;
        for (std::size_t m = 0; m < m_count; ++m) {
          std::size_t k = 0;
          for (;; ++k) {
            if (k == draws.size()) {
              if (k >= static_cast<std::size_t>(kMaxResample))
                throw DegenerateCombination("count_scan: persistent degenerate combination");
              draws.push_back(prefix_combinations(
                  draw_members(cfg, ref, side(), o.angle_range, o.c_mode)));
            }
            if (draws[k][m]) break;
          }
          chosen[s].push_back(*draws[k][m]);
        }
      }
      for (std::size_t m = 0; m < m_count; ++m)
        fid[m][p] = std::min(1.0, std::norm(inner(chosen[0][m], chosen[1][m])));
    });

    std::vector<double> d_by_m, se_by_m;
    for (std::size_t m = 0; m < m_count; ++m) {
      const FidelityHistogram hist = build_histogram(fid[m], dim, o.binning, o.n_bin);
      d_by_m.push_back(kl_divergence(hist));
      se_by_m.push_back(kl_std_error(hist));
      scan.rows.push_back({n_qubits, static_cast<int>(m) + 1, d_by_m.back(), o.seed, t,
                           se_by_m.back()});
    }
    scan.saturation.push_back(saturation_count(d_by_m, se_by_m, epsilon_sat, z_sat));
    scan.orders.push_back(std::move(order));
  }
  return scan;
}

void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows, bool with_trial) {
  out << "Q,L_or_M,d_kl,seed" << (with_trial ? ",trial" : "") << '\n';
  for (const ScanRow& r : rows) {
    out << r.n_qubits << ',' << r.index << ',' << format_double(r.d_kl) << ',' << r.seed;
    if (with_trial) out << ',' << r.trial;
    out << '\n';
  }
}

}  // namespace lca
