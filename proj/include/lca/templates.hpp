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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lca/circuit.hpp"

namespace lca {

/// How one layer entry expands to concrete qubit tuples at a given Q.
enum class QubitPattern {
  Each,           // (i)                     i = 0..Q-1
  Chain,          // (i, i+1)                i ascending
  ChainRev,       // (i+1, i)                i descending from Q-2
  Ring,           // (i, i+1 mod Q)          i ascending
  RingRev,        // (i, i+1 mod Q)          i descending from Q-1
  RingBack,       // (k-1 mod Q, k-2 mod Q)  k = 0..Q-1
  AllPairs,       // (i, j)                  i < j
  EvenPairs,      // (2k+1, 2k)
  OddPairs,       // (2k+2, 2k+1)
  OddPairQubits,  // qubits touched by OddPairs
  Fixed,          // explicit tuples
};

std::string_view to_string(QubitPattern p);
QubitPattern qubit_pattern_from_string(std::string_view name);

/// Expands a pattern at Q qubits. Ring patterns at Q = 2 collapse to the
/// single bond so symmetric gates are not applied twice.
std::vector<std::vector<int>> expand_pattern(QubitPattern pattern, int n_qubits,
                                             const std::vector<std::vector<int>>& fixed = {});

struct LayerEntry {
  GateKind kind = GateKind::H;
  PauliOp pauli = PauliOp::I;
  QubitPattern pattern = QubitPattern::Each;
  std::vector<std::vector<int>> fixed;
  bool trainable = false;
  std::optional<double> angle;
};

struct AnsatzSpec {
  int id = 0;
  std::string name;
  int catalog_circuit = 0;
  std::vector<LayerEntry> layer;

  /// Gates and slots produced by one layer at Q qubits.
  Circuit one_layer(int n_qubits) const;
};

/// The ansatz catalog (ids 1..14) plus auxiliary templates that can be
/// instantiated but are not catalog members. Immutable after load.
class AnsatzLibrary {
 public:
  /// Throws ParseError on malformed documents or duplicate ids and
  /// ValidationError when a template cannot be instantiated for every Q >= 2.
  static AnsatzLibrary load(const std::filesystem::path& path);
  static AnsatzLibrary parse(std::string_view json_text);

  /// Catalog ids in ascending order.
  std::vector<int> ids() const;
  std::vector<int> auxiliary_ids() const;
  bool contains(int id) const;
  const AnsatzSpec& spec(int id) const;

  /// L-fold repetition at Q qubits. Layer k uses slot offset k * (slots per
  /// layer). Throws DomainError for unknown ids, Q < 2 or L < 1.
  Circuit instantiate(int id, int n_qubits, int layers) const;

 private:
  std::map<int, AnsatzSpec> catalog_;
  std::map<int, AnsatzSpec> auxiliary_;
};

/// Location of the shipped ansatz14.json.
std::filesystem::path default_library_path();

}  // namespace lca
