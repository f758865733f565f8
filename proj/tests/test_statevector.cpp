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

#include <cmath>
#include <random>

#include "lca/eigen_oracle.hpp"
#include "lca/error.hpp"
#include "lca/statevector.hpp"
#include "lca/vqe.hpp"
#include "test_support.hpp"

namespace lca {
namespace {

using testing::dense_circuit;
using testing::dense_sum;
using testing::random_state;
using testing::to_vec;

TEST(Reference, AllZerosAndExplicit) {
  const StateVector z = init_reference(1);
  EXPECT_EQ(z.amps[0], cplx(1.0));
  EXPECT_EQ(z.amps[1], cplx(0.0));
  const StateVector r =
      init_reference(1, ReferenceSpec::explicit_state({std::sqrt(2.0 / 3), std::sqrt(1.0 / 3)}));
  EXPECT_NEAR(r.norm_squared(), 1.0, 1e-15);
  EXPECT_THROW(init_reference(2, ReferenceSpec::explicit_state({1, 1, 0, 0})), ValidationError);
  EXPECT_THROW(init_reference(2, ReferenceSpec::explicit_state({1, 0})), DimensionError);
}

TEST(Run, BasicGates) {
  const StateVector in(1);
  EXPECT_EQ(run(Circuit(1), in).amps, in.amps);
  Circuit c(1);
  c.add(GateOp::fixed(GateKind::RX, {0}, M_PI));
  const StateVector out = run(c, in);
  EXPECT_LT(std::abs(out.amps[0]), 1e-15);
  EXPECT_LT(std::abs(out.amps[1] - cplx(0, -1)), 1e-15);
  Circuit u(1);
  u.add(GateOp::parameterized(GateKind::RX, {0}, 0));
  u.param_count = 1;
  EXPECT_THROW(run(u, in), ValidationError);
  EXPECT_THROW(run(Circuit(2), in), DimensionError);
}

TEST(Run, MatchesKroneckerOracle) {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 5; ++n)
    for (int trial = 0; trial < 4; ++trial) {
      Circuit c = testing::random_circuit(n, 25, rng);
      c = lca::bind(c, testing::random_angles(c.param_count, rng));
      c.add(GateOp::phase_on_zeros(n, 0.77));
      const StateVector in = random_state(n, rng);
      const auto got = to_vec(run(c, in));
      const testing::Vec want = dense_circuit(c) * to_vec(in);
      EXPECT_LT((got - want).norm(), 1e-12) << "n=" << n;
    }
}

TEST(Run, UnitarityUpToTwelveQubits) {
  std::mt19937_64 rng(8);
  for (int n : {2, 6, 9, 12}) {
    Circuit c = testing::random_circuit(n, 60, rng);
    c = lca::bind(c, testing::random_angles(c.param_count, rng));
    const StateVector out = run(c, random_state(n, rng));
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-10);
  }
}

TEST(Run, GateThenInverse) {
  std::mt19937_64 rng(4);
  Circuit c = testing::random_circuit(4, 40, rng);
  c = lca::bind(c, testing::random_angles(c.param_count, rng));
  const StateVector in = random_state(4, rng);
  for (const GateOp& g : c.gates) {
    Circuit one(4);
    one.add(g);
    StateVector s = run(one, in);
    s = run(adjoint(one), s);
    for (std::size_t k = 0; k < s.dim(); ++k) EXPECT_LT(std::abs(s.amps[k] - in.amps[k]), 1e-12);
  }
}

TEST(PhaseOnZeros, ReflectionAtPi) {
  for (int n = 1; n <= 4; ++n) {
    Circuit c(n);
    c.add(GateOp::phase_on_zeros(n, M_PI));
    testing::Mat want = testing::Mat::Identity(1 << n, 1 << n);
    want(0, 0) -= 2.0;
    std::mt19937_64 rng(n);
    const StateVector s = random_state(n, rng);
    EXPECT_LT((to_vec(run(c, s)) - want * to_vec(s)).norm(), 1e-12);
  }
}

TEST(Inner, Basics) {
  std::mt19937_64 rng(2);
  const StateVector s = random_state(3, rng);
  EXPECT_LT(std::abs(inner(s, s) - 1.0), 1e-12);
  StateVector one(1);
  one.amps = {0, 1};
  EXPECT_EQ(inner(StateVector(1), one), cplx(0.0));
  EXPECT_THROW(inner(StateVector(1), StateVector(2)), DimensionError);
}

TEST(Inner, ProbabilityFromOverlapCircuit) {
  std::mt19937_64 rng(9);
  Circuit a = testing::random_circuit(3, 10, rng), b = testing::random_circuit(3, 10, rng);
  a = lca::bind(a, testing::random_angles(a.param_count, rng));
  b = lca::bind(b, testing::random_angles(b.param_count, rng));
  const StateVector sa = run(a, StateVector(3)), sb = run(b, StateVector(3));
  Circuit both(3);
  append(both, a);
  append(both, adjoint(b));
  EXPECT_NEAR(std::norm(inner(sa, sb)), prob_all_zeros(run(both, StateVector(3))), 1e-12);
}

TEST(Expval, PauliBasics) {
  PauliSum z(1);
  z.add(PauliString::from_label("Z"));
  EXPECT_DOUBLE_EQ(expval(StateVector(1), z), 1.0);
  Circuit h(1);
  h.add(GateOp::plain(GateKind::H, {0}));
  PauliSum x(1);
  x.add(PauliString::from_label("X"));
  EXPECT_NEAR(expval(run(h, StateVector(1)), x), 1.0, 1e-15);
  EXPECT_THROW(expval(StateVector(2), z), DimensionError);
}

TEST(Expval, MatchesDenseQuadraticForm) {
  std::mt19937_64 rng(17);
  const PauliSum xy = xy_hamiltonian({4, 1.0, 1.0, 0.5, 0.5});
  const StateVector s = random_state(4, rng);
  const auto v = to_vec(s);
  EXPECT_NEAR(expval(s, xy), v.dot(dense_sum(xy) * v).real(), 1e-10);
  for (int n = 1; n <= 8; ++n) {
    const PauliSum h = testing::random_hamiltonian(n, 6, rng);
    const StateVector r = random_state(n, rng);
    const auto w = to_vec(r);
    EXPECT_NEAR(expval(r, h), w.dot(dense_sum(h) * w).real(), 1e-10);
  }
}

TEST(MatrixElement, Basics) {
  StateVector one(1);
  one.amps = {0, 1};
  EXPECT_EQ(matrix_element(StateVector(1), one, PauliString::from_label("X")), cplx(1.0));
  EXPECT_EQ(matrix_element(StateVector(1), one, PauliString::from_label("Z")), cplx(0.0));
  EXPECT_EQ(matrix_element(StateVector(1), one, PauliString::from_label("X", 2.5)), cplx(2.5));
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const StateVector a = random_state(3, rng), b = random_state(3, rng);
    const PauliSum h = testing::random_hamiltonian(3, 1, rng);
    const PauliString& p = h.terms[0];
    EXPECT_LT(std::abs(matrix_element(a, a, p).imag()), 1e-12);
    const cplx want = to_vec(a).dot(testing::dense_pauli(p) * to_vec(b));
    EXPECT_LT(std::abs(matrix_element(a, b, p) - want), 1e-12);
  }
}

TEST(ProbAllZeros, Basics) {
  EXPECT_DOUBLE_EQ(prob_all_zeros(StateVector(3)), 1.0);
  StateVector u(2);
  u.amps = {0.5, 0.5, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(prob_all_zeros(u), 0.25);
  std::mt19937_64 rng(12);
  const StateVector s = random_state(4, rng);
  EXPECT_NEAR(prob_all_zeros(s), std::norm(inner(StateVector(4), s)), 1e-12);
}

TEST(SampleEstimate, Contract) {
  Rng rng(1);
  EXPECT_EQ(sample_estimate(1.0, EstimateKind::Probability, 100, rng), 1.0);
  EXPECT_EQ(sample_estimate(0.0, EstimateKind::Probability, 100, rng), 0.0);
  EXPECT_EQ(sample_estimate(-1.0, EstimateKind::PauliExpectation, 100, rng), -1.0);
  Rng r1(42), r2(42);
  const double a = sample_estimate(0.5, EstimateKind::Probability, 1000000, r1);
  const double b = sample_estimate(0.5, EstimateKind::Probability, 1000000, r2);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a, 0.5, 0.002);
  EXPECT_THROW(sample_estimate(0.5, EstimateKind::Probability, 0, rng), DomainError);
  EXPECT_THROW(sample_estimate(1.5, EstimateKind::Probability, 10, rng), DomainError);
}

TEST(SampleEstimate, RmsHalvesWhenShotsQuadruple) {
  auto rms = [](std::int64_t shots, EstimateKind kind, double v) {
    double s2 = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      Rng rng = make_stream(77, {static_cast<std::uint64_t>(shots), t});
      const double e = sample_estimate(v, kind, shots, rng) - v;
      s2 += e * e;
    }
    return std::sqrt(s2 / 100);
  };
  for (auto [kind, v] : {std::pair{EstimateKind::Probability, 0.3},
                         std::pair{EstimateKind::PauliExpectation, -0.2}}) {
    const double ratio = rms(1000, kind, v) / rms(4000, kind, v);
    EXPECT_GT(ratio, 2.0 * 0.8);
    EXPECT_LT(ratio, 2.0 * 1.2);
  }
}

TEST(MinEigenvalue, SmallCases) {
  PauliSum z(1);
  z.add(PauliString::from_label("Z"));
  EXPECT_NEAR(min_eigenvalue(z, 1), -1.0, 1e-12);
  const PauliSum xx = xy_hamiltonian({2, 1.0, 0.0, 0.0, 0.0});
  ASSERT_EQ(xx.terms.size(), 2u);
  EXPECT_NEAR(min_eigenvalue(xx, 2), -2.0, 1e-12);
  EXPECT_EQ(min_eigenvalue(PauliSum(3), 3), 0.0);
  EXPECT_THROW(min_eigenvalue(PauliSum(15), 15), CapacityError);
}

TEST(MinEigenvalue, DenseMatrixMatchesKronecker) {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 5; ++n) {
    const PauliSum h = testing::random_hamiltonian(n, 8, rng);
    EXPECT_LT((dense_matrix(h, n) - dense_sum(h)).norm(), 1e-12);
  }
}

TEST(MinEigenvalue, LanczosAgreesWithDense) {
  // Lanczos serves n > 8; compare it against dense diagonalization at n = 9, 10
  // via the dense matrix of the same sum.
  for (int n : {9, 10}) {
    const PauliSum h = xy_hamiltonian({n, 1.0, 0.7, 0.5, 0.3});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h, n), Eigen::EigenvaluesOnly);
    EXPECT_NEAR(min_eigenvalue(h, n), es.eigenvalues()(0), 1e-9) << n;
  }
}

}  // namespace
}  // namespace lca
