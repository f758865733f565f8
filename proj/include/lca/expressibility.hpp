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
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lca/circuit.hpp"
#include "lca/lca.hpp"
#include "lca/rng.hpp"
#include "lca/statevector.hpp"

namespace lca {

class AnsatzLibrary;

enum class Binning { Fixed, Unfixed };
std::string_view to_string(Binning b);
Binning binning_from_string(std::string_view name);

/// Haar fidelity density (N-1)(1-F)^{N-2} in Hilbert-space dimension N.
double haar_pdf(double fidelity, double dim);

/// Integral of haar_pdf over [lo, hi]: (1-lo)^{N-1} - (1-hi)^{N-1}.
double haar_bin_mass(double lo, double hi, double dim);
/// Natural log of haar_bin_mass, accurate when the mass underflows.
double log_haar_bin_mass(double lo, double hi, double dim);

struct FidelityHistogram {
  std::vector<double> edges;
  std::vector<std::int64_t> counts;
  std::vector<double> log_haar;  // log Haar mass per bin
  std::int64_t total = 0;
  Binning binning = Binning::Unfixed;
  int n_bin = 0;
};

/// Equal-width bins over [0, 1] (Fixed) or [min, max] of the samples
/// (Unfixed). Throws DomainError on empty input or n_bin < 2 and
/// DegenerateRegion when Unfixed samples span zero width.
FidelityHistogram build_histogram(std::span<const double> samples, double dim, Binning binning,
                                  int n_bin);

/// Sum_i P_i ln(P_i / Q_i) over bins with nonzero counts.
double kl_divergence(const FidelityHistogram& histogram);
double kl_divergence(std::span<const double> samples, double dim, Binning binning, int n_bin);

/// Standard error of the plug-in estimate: the delta-method term
/// (sum P ln^2(P/Q) - D^2) / n less its noise part (K - 1) / n^2, plus the
/// chi-square term (K - 1) / (2 n^2), with K occupied bins and n samples.
double kl_std_error(const FidelityHistogram& histogram);

/// Writes bin_lo,bin_hi,p_est,p_haar rows.
void write_histogram_csv(std::ostream& out, const FidelityHistogram& histogram);

/// Draws one random state from its stream.
using StateSampler = std::function<StateVector(Rng&)>;

/// Fidelities |<psi_a|psi_b>|^2 of independent pairs; pair p draws side s
/// from the stream keyed (seed, p, s), so results do not depend on thread
/// count or evaluation order.
std::vector<double> sample_fidelities(const StateSampler& sampler, std::int64_t pairs,
                                      std::uint64_t seed);

enum class CoefficientMode {
  FixedOnes,  // c_i = 1
  Sampled,    // Re c_i, Im c_i uniform in [-1, 1]
};
std::string_view to_string(CoefficientMode m);
CoefficientMode coefficient_mode_from_string(std::string_view name);

struct ExprOptions {
  std::int64_t pairs = 5000;
  Binning binning = Binning::Unfixed;
  int n_bin = 75;
  /// Angles are drawn uniformly from [0, angle_range). The default covers
  /// the full period of e^{-i theta P / 2}, including controlled rotations.
  double angle_range = 4.0 * std::numbers::pi;
  CoefficientMode c_mode = CoefficientMode::FixedOnes;
  std::uint64_t seed = 0;
};

struct ExprResult {
  double d_kl = 0.0;
  std::int64_t pairs = 0;
  Binning binning = Binning::Unfixed;
  int n_bin = 0;
  std::uint64_t seed = 0;
  FidelityHistogram histogram;
};

/// Sampler over parameter vectors of a circuit acting on a fixed reference.
StateSampler circuit_sampler(Circuit circuit, StateVector reference, double angle_range);

/// Sampler over the combined state of the config's members. Each side draws
/// a key, and member m takes its angles (and coefficient) from the stream
/// (key, m); degenerate combinations draw a fresh key.
StateSampler lca_sampler(LcaConfig config, double angle_range, CoefficientMode c_mode);

ExprResult expr_states(const StateSampler& sampler, int n_qubits, const ExprOptions& options);
ExprResult expr_circuit(const Circuit& circuit, const StateVector& reference,
                        const ExprOptions& options);
ExprResult expr_single(const AnsatzLibrary& library, int id, int n_qubits, int layers,
                       const ExprOptions& options);
ExprResult expr_lca(const LcaConfig& config, const ExprOptions& options);
ExprResult expr_lca(const AnsatzLibrary& library, std::span<const int> ids, int n_qubits,
                    int layers, const ExprOptions& options);

/// (Min - d_lca) / Min over the member values; positive when the
/// combination is more expressive. Throws DomainError when Min <= 0 or the
/// list is empty.
double improvement_R(double d_lca, std::span<const double> member_d_kls);

struct ScanRow {
  int n_qubits = 0;
  int index = 0;  // L for depth scans, M for count scans
  double d_kl = 0.0;
  std::uint64_t seed = 0;
  int trial = 0;
  double std_error = 0.0;
};

/// d_kl of a template for each L. Every L uses the same seed.
std::vector<ScanRow> depth_scan(const AnsatzLibrary& library, int id, int n_qubits,
                                std::span<const int> layers, const ExprOptions& options);

/// Smallest L whose d_kl lies within `tolerance` (relative) of the plateau,
/// the mean of the last two rows. Rows must be sorted by L.
int threshold_layer(std::span<const ScanRow> rows, double tolerance = 0.1);

struct LinearFit {
  double a = 0.0;
  double b = 0.0;
};

/// Least-squares L_th = a Q + b. Throws DomainError with fewer than two
/// distinct Q values.
LinearFit fit_threshold(std::span<const std::pair<int, int>> q_and_threshold);

struct CountScan {
  std::vector<ScanRow> rows;            // per trial, M = 1..max_m
  std::vector<std::vector<int>> orders;  // ansatz insertion order per trial
  std::vector<int> saturation;          // M_c per trial
};

/// For each trial, a random insertion order over the catalog (keyed
/// (seed, trial)) and the combined-state d_kl of every prefix. Row M of a
/// trial equals expr_lca of that prefix under the same options.
/// M_c uses saturation_count with significance `z_sat`.
CountScan count_scan(const AnsatzLibrary& library, int n_qubits, int layers, int max_m,
                     int trials, const ExprOptions& options, double epsilon_sat = 0.05,
                     double z_sat = 3.0);

/// Smallest M such that the relative improvement (d(M'-1) - d(M')) / d(M'-1)
/// stays below epsilon for every M' in (M, max]. Values are d(1), d(2), ...
int saturation_count(std::span<const double> d_by_m, double epsilon = 0.05);

/// As above, but a step counts as an improvement only when it exceeds
/// epsilon d(M'-1) by z combined standard errors. z = 0 is the plain rule.
int saturation_count(std::span<const double> d_by_m, std::span<const double> std_errors,
                     double epsilon, double z);

/// Writes Q,L_or_M,d_kl,seed rows (plus trial when `with_trial`).
void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows, bool with_trial = false);

/// Deterministic decimal rendering used by every CSV writer.
std::string format_double(double v);

}  // namespace lca
