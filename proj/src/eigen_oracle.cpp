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

#include "lca/eigen_oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <random>
#include <cmath>
#include <string>
#include <vector>

#include "lca/error.hpp"
#include "lca/rng.hpp"
#include "lca/statevector.hpp"

namespace lca {
namespace {

constexpr int kDenseMaxQubits = 8;

void check_width(const PauliSum& h, int n) {
  if (n < 1) throw DomainError("min_eigenvalue: n must be >= 1");
  if (n > kOracleMaxQubits)
    throw CapacityError("min_eigenvalue: n = " + std::to_string(n) + " exceeds the " +
                        std::to_string(kOracleMaxQubits) + "-qubit oracle cap");
  for (const PauliString& t : h.terms)
    if (t.n_qubits() != n) throw DimensionError("min_eigenvalue: term width differs from n");
}

double lanczos_min(const PauliSum& h, int n) {
  const std::size_t dim = std::size_t{1} << n;
  const int max_iter = static_cast<int>(std::min<std::size_t>(dim, 400));
  Rng rng(derive_seed(0x5eed, {static_cast<std::uint64_t>(n)}));
  std::normal_distribution<double> gauss;

  std::vector<Eigen::VectorXcd> basis;
  Eigen::VectorXcd v(dim);
  for (std::size_t k = 0; k < dim; ++k) v[k] = {gauss(rng), gauss(rng)};
  v.normalize();

  std::vector<double> alpha, beta;
  double prev = std::numeric_limits<double>::infinity();
  double best = prev;
  StateVector sv(n);
  for (int it = 0; it < max_iter; ++it) {
    basis.push_back(v);
    for (std::size_t k = 0; k < dim; ++k) sv.amps[k] = v[k];
    StateVector hv = apply_sum(sv, h);
    Eigen::VectorXcd w = Eigen::Map<Eigen::VectorXcd>(hv.amps.data(), dim);
    alpha.push_back(v.dot(w).real());
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b.dot(w) * b;
    const double bnorm = w.norm();

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    best = es.eigenvalues()(0);
    const double residual = bnorm * std::abs(es.eigenvectors()(m - 1, 0));
    if (bnorm < 1e-12 || (residual < 1e-11 && std::abs(best - prev) < 1e-13)) break;
    prev = best;
    beta.push_back(bnorm);
    v = w / bnorm;
  }
  return best;
}

}  // namespace

Eigen::MatrixXcd dense_matrix(const PauliSum& h, int n) {
  if (n < 1 || n > kOracleMaxQubits) throw CapacityError("dense_matrix: unsupported width");
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  static constexpr std::complex<double> kPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const PauliString& t : h.terms) {
    if (t.n_qubits() != n) throw DimensionError("dense_matrix: term width differs from n");
    const std::uint64_t xm = t.x_mask(), zm = t.z_mask();
    const std::complex<double> ph = t.coeff * kPow[t.y_count() % 4];
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ xm), static_cast<Eigen::Index>(b)) += ph * sign;
    }
  }
  return m;
}

double min_eigenvalue(const PauliSum& h, int n) {
  check_width(h, n);
  if (h.terms.empty()) return 0.0;
  if (n <= kDenseMaxQubits) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h, n),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }
  return lanczos_min(h, n);
}

}  // namespace lca
