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

#include <Eigen/Dense>

#include "lca/pauli.hpp"

namespace lca {

/// Largest register accepted by min_eigenvalue.
inline constexpr int kOracleMaxQubits = 14;

/// Dense 2^n x 2^n matrix of the sum, in the qubit-0-LSB basis.
Eigen::MatrixXcd dense_matrix(const PauliSum& h, int n_qubits);

/// Ground energy of H on n qubits. Dense diagonalization up to 8 qubits,
/// Lanczos with full reorthogonalization above. Throws CapacityError for
/// n > kOracleMaxQubits. An empty sum has ground energy 0.
double min_eigenvalue(const PauliSum& h, int n_qubits);

}  // namespace lca
