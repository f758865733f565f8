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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lca/error.hpp"
#include "lca/expressibility.hpp"
#include "lca/lca.hpp"
#include "lca/parallel.hpp"
#include "lca/templates.hpp"
#include "test_support.hpp"

namespace lca {
namespace {

using testing::shipped_library;

std::vector<double> haar_samples(std::int64_t n, double dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out;
  out.reserve(n);
  for (std::int64_t k = 0; k < n; ++k) out.push_back(1.0 - std::pow(1.0 - u(rng), 1.0 / (dim - 1)));
  return out;
}

Circuit single_rotation(GateKind kind) {
  Circuit c(1);
  c.add(GateOp::parameterized(kind, {0}, 0));
  c.param_count = 1;
  return c;
}

ReferenceSpec demo_reference() {
  return ReferenceSpec::explicit_state({std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0)});
}

class WorkerGuard {
 public:
  WorkerGuard() : saved_(worker_count()) {}
  ~WorkerGuard() { set_worker_count(saved_); }

 private:
  std::size_t saved_;
};

TEST(Haar, PdfClosedForm) {
  EXPECT_DOUBLE_EQ(haar_pdf(0.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(haar_pdf(0.3, 2.0), 1.0);
  EXPECT_NEAR(haar_pdf(0.25, 16.0), 15.0 * std::pow(0.75, 14), 1e-12);
  EXPECT_NEAR(haar_pdf(0.0, 4.0), 3.0, 1e-15);
}

TEST(Haar, BinMassClosedFormAndLogVariant) {
  const double n = 16.0;
  EXPECT_NEAR(haar_bin_mass(0.1, 0.2, n), std::pow(0.9, 15) - std::pow(0.8, 15), 1e-15);
  EXPECT_NEAR(std::exp(log_haar_bin_mass(0.1, 0.2, n)), haar_bin_mass(0.1, 0.2, n), 1e-14);
  // Far tail in high dimension underflows linearly but not in log space.
  const double dim = std::pow(2.0, 20);
  const double lm = log_haar_bin_mass(0.9, 1.0, dim);
  EXPECT_TRUE(std::isfinite(lm));
  EXPECT_NEAR(lm, (dim - 1) * std::log(0.1), 1e-6 * std::abs(lm));
}

TEST(Haar, MassPartitionSumsToOne) {
  for (double dim : {2.0, 4.0, 16.0, 256.0}) {
    for (int nb : {1, 7, 75}) {
      double total = 0.0;
      for (int k = 0; k < nb; ++k)
        total += haar_bin_mass(double(k) / nb, double(k + 1) / nb, dim);
      EXPECT_NEAR(total, 1.0, 1e-14) << dim << " " << nb;
    }
  }
}

TEST(Histogram, FixedEdgesSpanUnitInterval) {
  const std::vector<double> s{0.05, 0.15, 0.95, 1.0};
  const FidelityHistogram h = build_histogram(s, 4.0, Binning::Fixed, 10);
  ASSERT_EQ(h.edges.size(), 11u);
  EXPECT_DOUBLE_EQ(h.edges.front(), 0.0);
  EXPECT_DOUBLE_EQ(h.edges.back(), 1.0);
  EXPECT_EQ(h.total, 4);
  EXPECT_EQ(h.counts[0], 1);
  EXPECT_EQ(h.counts[1], 1);
  EXPECT_EQ(h.counts[9], 2);
}

TEST(Histogram, UnfixedEdgesSpanSampleRange) {
  const std::vector<double> s{0.2, 0.3, 0.6};
  const FidelityHistogram h = build_histogram(s, 4.0, Binning::Unfixed, 4);
  EXPECT_DOUBLE_EQ(h.edges.front(), 0.2);
  EXPECT_DOUBLE_EQ(h.edges.back(), 0.6);
  EXPECT_EQ(h.counts[0] + h.counts[1] + h.counts[2] + h.counts[3], 3);
  EXPECT_EQ(h.counts[3], 1);
}

TEST(Histogram, ConstantSamplesAreDegenerateWhenUnfixed) {
  const std::vector<double> s(100, 0.5);
  EXPECT_THROW(build_histogram(s, 4.0, Binning::Unfixed, 10), DegenerateRegion);
  const double d = kl_divergence(s, 4.0, Binning::Fixed, 10);
  EXPECT_GT(d, 1.0);
}

TEST(Histogram, RejectsBadInput) {
  const std::vector<double> s{0.1, 0.2};
  EXPECT_THROW(build_histogram(s, 4.0, Binning::Fixed, 0), DomainError);
  const std::vector<double> none;
  EXPECT_THROW(build_histogram(none, 4.0, Binning::Fixed, 5), DomainError);
}

TEST(KlDivergence, MatchedCountsGiveZero) {
  // Counts placed exactly at the Haar masses for dim 2 (uniform).
  std::vector<double> s;
  for (int k = 0; k < 10; ++k)
    for (int r = 0; r < 50; ++r) s.push_back((k + 0.5) / 10.0);
  EXPECT_NEAR(kl_divergence(s, 2.0, Binning::Fixed, 10), 0.0, 1e-12);
}

TEST(KlDivergence, HandComputedTwoBin) {
  // dim 2 Haar is uniform; all mass in one of two bins gives log 2.
  const std::vector<double> s{0.1, 0.2, 0.3};
  EXPECT_NEAR(kl_divergence(s, 2.0, Binning::Fixed, 2), std::log(2.0), 1e-12);
}

TEST(KlDivergence, HaarSelfTest) {
  const std::vector<double> s = haar_samples(100000, 16.0, 17);
  EXPECT_LT(kl_divergence(s, 16.0, Binning::Unfixed, 75), 0.01);
  EXPECT_LT(kl_divergence(s, 16.0, Binning::Fixed, 75), 0.01);
}

TEST(KlDivergence, NonNegative) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> s;
    for (int k = 0; k < 200; ++k) s.push_back(u(rng) * u(rng));
    EXPECT_GE(kl_divergence(s, 8.0, Binning::Fixed, 20), -1e-12);
  }
}

TEST(Expressibility, CsvHasOneRowPerBin) {
  const std::vector<double> s = haar_samples(1000, 4.0, 1);
  const FidelityHistogram h = build_histogram(s, 4.0, Binning::Unfixed, 8);
  std::ostringstream os;
  write_histogram_csv(os, h);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("bin_lo,bin_hi,p_est,p_haar\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 9);
}

TEST(Expressibility, DeterministicAcrossThreadCounts) {
  WorkerGuard guard;
  ExprOptions o;
  o.pairs = 400;
  o.seed = 99;
  set_worker_count(1);
  const ExprResult a = expr_single(shipped_library(), 4, 3, 2, o);
  const std::vector<int> ids{1, 9, 12};
  const ExprResult la = expr_lca(shipped_library(), ids, 3, 1, o);
  set_worker_count(4);
  const ExprResult b = expr_single(shipped_library(), 4, 3, 2, o);
  const ExprResult lb = expr_lca(shipped_library(), ids, 3, 1, o);
  EXPECT_EQ(a.d_kl, b.d_kl);
  EXPECT_EQ(a.histogram.counts, b.histogram.counts);
  EXPECT_EQ(la.d_kl, lb.d_kl);
}

TEST(Expressibility, SeedChangesSamples) {
  ExprOptions o;
  o.pairs = 300;
  o.seed = 1;
  const double a = expr_single(shipped_library(), 2, 3, 1, o).d_kl;
  o.seed = 2;
  const double b = expr_single(shipped_library(), 2, 3, 1, o).d_kl;
  EXPECT_NE(a, b);
}

TEST(Expressibility, UnfixedNotBelowFixedInHighDimension) {
  ExprOptions o;
  o.pairs = 500;
  o.seed = 5;
  o.binning = Binning::Unfixed;
  const double unfixed = expr_single(shipped_library(), 11, 12, 1, o).d_kl;
  o.binning = Binning::Fixed;
  const double fixed = expr_single(shipped_library(), 11, 12, 1, o).d_kl;
  EXPECT_GE(unfixed, fixed);
}

TEST(Expressibility, FixedRotationCircuitIsMaximallyUnexpressive) {
  Circuit c(2);
  c.add(GateOp::plain(GateKind::H, {0}));
  ExprOptions o;
  o.pairs = 200;
  o.binning = Binning::Fixed;
  o.n_bin = 20;
  const ExprResult r = expr_circuit(c, init_reference(2, ReferenceSpec::all_zeros()), o);
  // Every fidelity is 1; all mass in the last bin.
  EXPECT_NEAR(r.d_kl, -log_haar_bin_mass(0.95, 1.0, 4.0), 1e-9);
}

TEST(Expressibility, SingleQubitDemoOrdering) {
  LcaConfig cfg;
  cfg.n_qubits = 1;
  cfg.members = {single_rotation(GateKind::RX), single_rotation(GateKind::RZ)};
  cfg.reference = demo_reference();
  const StateVector ref = init_reference(1, demo_reference());
  ExprOptions o;
  o.pairs = 1000;
  o.n_bin = 25;
  o.seed = 2024;
  const double drx = expr_circuit(cfg.members[0], ref, o).d_kl;
  const double drz = expr_circuit(cfg.members[1], ref, o).d_kl;
  const double dl = expr_lca(cfg, o).d_kl;
  EXPECT_NEAR(drx, 2.18, 0.3 * 2.18);
  EXPECT_NEAR(drz, 0.34, 0.3 * 0.34);
  EXPECT_NEAR(dl, 0.047, 0.5 * 0.047);
  EXPECT_LT(dl, std::min(drx, drz));
}

TEST(Improvement, RatioCases) {
  const std::vector<double> members{0.4, 0.2, 0.8};
  EXPECT_NEAR(improvement_R(0.1, members), 0.5, 1e-15);
  EXPECT_NEAR(improvement_R(0.2, members), 0.0, 1e-15);
  EXPECT_LT(improvement_R(0.3, members), 0.0);
  const std::vector<double> scaled{4.0, 2.0, 8.0};
  EXPECT_NEAR(improvement_R(1.0, scaled), improvement_R(0.1, members), 1e-15);
  EXPECT_THROW(improvement_R(0.1, std::vector<double>{}), DomainError);
  EXPECT_THROW(improvement_R(0.1, std::vector<double>{0.0}), DomainError);
}

std::vector<ScanRow> rows_of(std::span<const double> d) {
  std::vector<ScanRow> rows;
  for (std::size_t k = 0; k < d.size(); ++k) rows.push_back({4, int(k + 1), d[k], 0, 0});
  return rows;
}

TEST(Thresholds, ThresholdLayerFindsPlateau) {
  const std::vector<double> d{1.0, 0.5, 0.21, 0.2, 0.2, 0.2};
  EXPECT_EQ(threshold_layer(rows_of(d)), 3);
  const std::vector<double> flat{0.2, 0.2, 0.2};
  EXPECT_EQ(threshold_layer(rows_of(flat)), 1);
}

TEST(Thresholds, LinearFitRecoversLine) {
  const std::vector<std::pair<int, int>> pts{{2, 5}, {3, 7}, {4, 9}, {6, 13}};
  const LinearFit f = fit_threshold(pts);
  EXPECT_NEAR(f.a, 2.0, 1e-12);
  EXPECT_NEAR(f.b, 1.0, 1e-12);
  const std::vector<std::pair<int, int>> one{{2, 5}};
  EXPECT_THROW(fit_threshold(one), DomainError);
}

TEST(Thresholds, SaturationCount) {
  std::vector<double> halving;
  for (int k = 0; k < 10; ++k) halving.push_back(std::pow(0.5, k));
  EXPECT_EQ(saturation_count(halving), 10);
  const std::vector<double> d{0.8, 0.3, 0.1, 0.099, 0.1, 0.098};
  EXPECT_EQ(saturation_count(d), 3);
}

TEST(Thresholds, SignificanceIgnoresNoiseAtTheFloor) {
  const std::vector<double> d{1.0, 0.1, 0.01, 0.0105, 0.0094, 0.0101, 0.0089, 0.0097};
  const std::vector<double> se(d.size(), 0.001);
  EXPECT_EQ(saturation_count(d, se, 0.05, 3.0), 3);
  EXPECT_EQ(saturation_count(d, se, 0.05, 0.0), saturation_count(d, 0.05));
  EXPECT_GT(saturation_count(d, 0.05), 3);
  const std::vector<double> short_se{0.1};
  EXPECT_THROW(saturation_count(d, short_se, 0.05, 2.0), DimensionError);
  EXPECT_THROW(saturation_count(d, se, 0.05, -1.0), DomainError);
}

TEST(KlStdError, MatchesReplicateSpread) {
  // Replicate Haar experiments at the finite-sample floor and away from it.
  for (double dim : {16.0, 2.0}) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double s = 0.0, s2 = 0.0, est = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      std::vector<double> f;
      for (int k = 0; k < 3000; ++k) {
        const double x = 1.0 - std::pow(1.0 - u(rng), 1.0 / 15.0);
        f.push_back(x);
      }
      const FidelityHistogram h = build_histogram(f, dim, Binning::Unfixed, 40);
      const double d = kl_divergence(h);
      s += d;
      s2 += d * d;
      est += kl_std_error(h);
    }
    const double mean = s / reps;
    const double sd = std::sqrt(s2 / reps - mean * mean);
    EXPECT_NEAR(est / reps, sd, 0.2 * sd) << dim;
  }
}

TEST(CountScan, RowsMatchDirectEvaluation) {
  ExprOptions o;
  o.pairs = 200;
  o.seed = 41;
  const CountScan scan = count_scan(shipped_library(), 3, 1, 4, 2, o);
  ASSERT_EQ(scan.rows.size(), 8u);
  ASSERT_EQ(scan.orders.size(), 2u);
  ASSERT_EQ(scan.saturation.size(), 2u);
  for (const ScanRow& row : scan.rows) {
    const std::vector<int>& order = scan.orders[row.trial];
    const std::vector<int> prefix(order.begin(), order.begin() + row.index);
    ExprOptions oo = o;
    oo.seed = row.seed;
    EXPECT_EQ(expr_lca(shipped_library(), prefix, 3, 1, oo).d_kl, row.d_kl);
  }
  for (const std::vector<int>& order : scan.orders) {
    ASSERT_EQ(order.size(), 4u);
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int id : order) EXPECT_TRUE(shipped_library().contains(id));
  }
}

TEST(DepthScan, RowsMatchDirectEvaluation) {
  ExprOptions o;
  o.pairs = 200;
  o.seed = 3;
  const std::vector<int> layers{1, 2, 3};
  const std::vector<ScanRow> rows = depth_scan(shipped_library(), 10, 3, layers, o);
  ASSERT_EQ(rows.size(), 3u);
  for (const ScanRow& row : rows) {
    ExprOptions oo = o;
    oo.seed = row.seed;
    EXPECT_EQ(expr_single(shipped_library(), 10, 3, row.index, oo).d_kl, row.d_kl);
  }
  std::ostringstream os;
  write_scan_csv(os, rows);
  EXPECT_EQ(os.str().rfind("Q,L_or_M,d_kl,seed\n", 0), 0u);
}

TEST(Names, RoundTrip) {
  for (Binning b : {Binning::Fixed, Binning::Unfixed})
    EXPECT_EQ(binning_from_string(to_string(b)), b);
  for (CoefficientMode m : {CoefficientMode::FixedOnes, CoefficientMode::Sampled})
    EXPECT_EQ(coefficient_mode_from_string(to_string(m)), m);
  EXPECT_THROW(binning_from_string("wide"), ParseError);
}

}  // namespace
}  // namespace lca
