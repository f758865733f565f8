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

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "lca/circuit.hpp"
#include "lca/error.hpp"
#include "lca/gate_cost.hpp"
#include "lca/statevector.hpp"
#include "lca/templates.hpp"
#include "test_support.hpp"

namespace lca {
namespace {

using testing::shipped_library;

nlohmann::json shipped_json() {
  std::ifstream in(default_library_path());
  return nlohmann::json::parse(in);
}

int slots_in_layer_json(const nlohmann::json& tmpl, int q) {
  // Independent count straight from the document: one slot per expanded
  // qubit tuple of every "param": "slot" entry.
  int total = 0;
  for (const auto& e : tmpl.at("layer")) {
    if (!e.contains("param") || !e.at("param").is_string()) continue;
    const std::string pat = e.at("pattern").get<std::string>();
    int count = 0;
    if (pat == "each") count = q;
    else if (pat == "odd_pair_qubits") count = 2 * ((q - 1) / 2);
    else if (pat == "even_pairs") count = q / 2;
    else if (pat == "odd_pairs") count = (q - 1) / 2;
    else if (pat == "chain" || pat == "chain_rev") count = q - 1;
    else if (pat == "ring" || pat == "ring_rev" || pat == "ring_back") count = q == 2 ? 1 : q;
    else ADD_FAILURE() << "pattern not covered by the oracle: " << pat;
    total += count;
  }
  return total;
}

TEST(Templates, ShippedLibraryHasFourteenIds) {
  const auto ids = shipped_library().ids();
  ASSERT_EQ(ids.size(), 14u);
  for (int k = 0; k < 14; ++k) EXPECT_EQ(ids[static_cast<std::size_t>(k)], k + 1);
}

TEST(Templates, EveryTemplateValidAcrossWidths) {
  for (int id : shipped_library().ids())
    for (int q = 2; q <= 9; ++q)
      for (int l = 1; l <= 3; ++l) {
        Circuit c = shipped_library().instantiate(id, q, l);
        EXPECT_NO_THROW(c.validate()) << "id " << id << " Q " << q << " L " << l;
      }
}

TEST(Templates, ParamCountMatchesFileSlots) {
  const auto doc = shipped_json();
  for (const auto& t : doc.at("templates")) {
    const int id = t.at("id").get<int>();
    for (int q : {2, 3, 4, 5, 6}) {
      const int slots = slots_in_layer_json(t, q);
      EXPECT_EQ(shipped_library().instantiate(id, q, 1).param_count, slots) << id << " Q=" << q;
      EXPECT_EQ(shipped_library().instantiate(id, q, 3).param_count, 3 * slots);
    }
  }
  EXPECT_EQ(shipped_library().instantiate(2, 4, 1).param_count, 8);
}

TEST(Templates, RepetitionAndSlotOffsets) {
  const Circuit one = shipped_library().instantiate(10, 4, 1);
  const Circuit three = shipped_library().instantiate(10, 4, 3);
  ASSERT_EQ(three.gates.size(), 3 * one.gates.size());
  EXPECT_EQ(three.param_count, 3 * one.param_count);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t g = 0; g < one.gates.size(); ++g) {
      const GateOp& a = one.gates[g];
      const GateOp& b = three.gates[k * one.gates.size() + g];
      EXPECT_EQ(a.kind, b.kind);
      EXPECT_EQ(a.qubits, b.qubits);
      if (a.slot) EXPECT_EQ(*b.slot, *a.slot + static_cast<int>(k) * one.param_count);
    }
  EXPECT_EQ(three.layers, 3);
  EXPECT_EQ(three.template_id, 10);
}

TEST(Templates, InstantiationIsDeterministic) {
  for (int id : shipped_library().ids()) {
    const Circuit a = shipped_library().instantiate(id, 5, 2);
    const Circuit b = shipped_library().instantiate(id, 5, 2);
    ASSERT_EQ(a.gates.size(), b.gates.size());
    for (std::size_t g = 0; g < a.gates.size(); ++g) {
      EXPECT_EQ(a.gates[g].kind, b.gates[g].kind);
      EXPECT_EQ(a.gates[g].qubits, b.gates[g].qubits);
      EXPECT_EQ(a.gates[g].slot, b.gates[g].slot);
    }
  }
}

TEST(Templates, Errors) {
  EXPECT_THROW(shipped_library().instantiate(99, 4, 1), DomainError);
  EXPECT_THROW(shipped_library().instantiate(1, 1, 1), DomainError);
  EXPECT_THROW(shipped_library().instantiate(1, 4, 0), DomainError);
  const std::string dup = R"({"templates":[
    {"id":1,"layer":[{"gate":"H","pattern":"each"}]},
    {"id":1,"layer":[{"gate":"H","pattern":"each"}]}]})";
  EXPECT_THROW(AnsatzLibrary::parse(dup), ParseError);
  EXPECT_THROW(AnsatzLibrary::parse("{not json"), ParseError);
  EXPECT_THROW(AnsatzLibrary::parse(R"({"templates":[{"id":1,"layer":[{"gate":"CNOT","pattern":"each"}]}]})"),
               ValidationError);
  EXPECT_THROW(AnsatzLibrary::parse(R"({"templates":[{"id":1,"layer":[{"gate":"H","pattern":"spiral"}]}]})"),
               ParseError);
  EXPECT_THROW(AnsatzLibrary::parse(
                   R"({"templates":[{"id":1,"layer":[{"gate":"CNOT","pattern":{"fixed":[[0,3]]}}]}]})"),
               ValidationError);
  EXPECT_THROW(AnsatzLibrary::load("/nonexistent/lib.json"), ParseError);
}

TEST(Templates, AuxiliaryTemplateIsNotInCatalog) {
  const auto& lib = shipped_library();
  EXPECT_TRUE(lib.contains(15));
  EXPECT_EQ(lib.ids().size(), 14u);
  ASSERT_EQ(lib.auxiliary_ids().size(), 1u);
  EXPECT_EQ(lib.instantiate(15, 4, 1).param_count, 8);
}

TEST(Patterns, RingCollapsesAtTwoQubits) {
  EXPECT_EQ(expand_pattern(QubitPattern::Ring, 2).size(), 1u);
  EXPECT_EQ(expand_pattern(QubitPattern::RingRev, 2).size(), 1u);
  EXPECT_EQ(expand_pattern(QubitPattern::Ring, 4).size(), 4u);
  EXPECT_EQ(expand_pattern(QubitPattern::AllPairs, 4).size(), 6u);
  const auto back = expand_pattern(QubitPattern::RingBack, 4);
  ASSERT_EQ(back.size(), 4u);
  EXPECT_EQ(back[0], (std::vector<int>{3, 2}));
  EXPECT_EQ(back[1], (std::vector<int>{0, 3}));
}

TEST(Circuit, Validation) {
  Circuit c(2);
  c.add(GateOp::plain(GateKind::CNOT, {0, 0}));
  EXPECT_THROW(c.validate(), ValidationError);
  Circuit d(2);
  d.add(GateOp::plain(GateKind::RX, {0}));
  EXPECT_THROW(d.validate(), ValidationError);
  Circuit e(2);
  e.add(GateOp::fixed(GateKind::H, {0}, 1.0));
  EXPECT_THROW(e.validate(), ValidationError);
  Circuit f(2);
  f.add(GateOp::plain(GateKind::X, {2}));
  EXPECT_THROW(f.validate(), ValidationError);
}

TEST(Generator, SingleQubitKinds) {
  const auto rx = generator_of(GateOp::parameterized(GateKind::RX, {0}, 0), 3);
  ASSERT_EQ(rx.size(), 1u);
  EXPECT_EQ(rx[0].pauli.label(), "XII");
  EXPECT_EQ(rx[0].scalar, std::complex<double>(0, -0.5));
  const auto rz = generator_of(GateOp::parameterized(GateKind::RZ, {2}, 0), 3);
  EXPECT_EQ(rz[0].pauli.label(), "IIZ");
  EXPECT_EQ(rz[0].scalar, std::complex<double>(0, -0.5));
  EXPECT_THROW(generator_of(GateOp::plain(GateKind::CNOT, {0, 1}), 3), UnsupportedGenerator);
}

TEST(Generator, InsertOnOneGateCircuit) {
  Circuit c(1);
  c.add(GateOp::parameterized(GateKind::RX, {0}, 0));
  c.param_count = 1;
  const Circuit b = lca::bind(c, std::vector<double>{0.3});
  const auto d = insert_generator(b, 0);
  ASSERT_EQ(d.size(), 1u);
  ASSERT_EQ(d[0].circuit.gates.size(), 2u);
  EXPECT_EQ(d[0].circuit.gates[1].kind, GateKind::Pauli);
  EXPECT_EQ(d[0].circuit.gates[1].pauli, PauliOp::X);
  EXPECT_EQ(d[0].scalar, std::complex<double>(0, -0.5));
  EXPECT_THROW(insert_generator(b, 1), DomainError);
}

// Finite-difference check of every rotation kind, and of random circuits.
TEST(Generator, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(11);
  const GateKind kinds[] = {GateKind::RX,  GateKind::RY,  GateKind::RZ,
                            GateKind::CRX, GateKind::CRY, GateKind::CRZ};
  for (GateKind kind : kinds) {
    Circuit c(3);
    c.add(GateOp::plain(GateKind::H, {0}));
    c.add(GateOp::fixed(GateKind::RY, {1}, 0.7));
    c.add(GateOp::fixed(GateKind::RX, {2}, -0.4));
    c.add(GateOp::parameterized(kind, arity(kind) == 2 ? std::vector<int>{0, 2} : std::vector<int>{1}, 0));
    c.add(GateOp::plain(GateKind::CNOT, {2, 1}));
    c.param_count = 1;
    const double th = 1.1;
    const double h = 1e-5;
    const StateVector ref(3);
    const auto plus = run(lca::bind(c, std::vector<double>{th + h}), ref);
    const auto minus = run(lca::bind(c, std::vector<double>{th - h}), ref);
    std::vector<std::complex<double>> deriv(8);
    for (const auto& dc : insert_generator(lca::bind(c, std::vector<double>{th}), 0)) {
      const auto s = run(dc.circuit, ref);
      for (int k = 0; k < 8; ++k) deriv[k] += dc.scalar * s.amps[k];
    }
    for (int k = 0; k < 8; ++k)
      EXPECT_LT(std::abs(deriv[k] - (plus.amps[k] - minus.amps[k]) / (2 * h)), 1e-8)
          << to_string(kind) << " amp " << k;
  }
  for (int trial = 0; trial < 5; ++trial) {
    const Circuit c = testing::random_circuit(3, 12, rng);
    const auto th = testing::random_angles(c.param_count, rng);
    const StateVector ref(3);
    for (int l = 0; l < c.param_count; ++l) {
      auto tp = th, tm = th;
      tp[l] += 1e-5;
      tm[l] -= 1e-5;
      const auto plus = run(lca::bind(c, tp), ref), minus = run(lca::bind(c, tm), ref);
      std::vector<std::complex<double>> deriv(8);
      for (const auto& dc : insert_generator(lca::bind(c, th), l)) {
        const auto s = run(dc.circuit, ref);
        for (int k = 0; k < 8; ++k) deriv[k] += dc.scalar * s.amps[k];
      }
      for (int k = 0; k < 8; ++k)
        EXPECT_LT(std::abs(deriv[k] - (plus.amps[k] - minus.amps[k]) / 2e-5), 1e-8);
    }
  }
}

TEST(PauliRotation, MatchesMatrixExponential) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> op(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<PauliOp> ops(3);
    for (auto& o : ops) o = static_cast<PauliOp>(op(rng));
    PauliString p(1.0, ops);
    if (p.is_identity()) continue;
    const double th = 0.9 + trial;
    Circuit c(3);
    for (auto& g : pauli_rotation_gates(p, th)) c.add(g);
    const auto P = testing::dense_pauli(p);
    const testing::Mat expect =
        std::cos(th / 2) * testing::Mat::Identity(8, 8) - testing::I1 * std::sin(th / 2) * P;
    EXPECT_LT((testing::dense_circuit(c) - expect).norm(), 1e-12) << p.label();
  }
  EXPECT_THROW(pauli_rotation_gates(PauliString::identity(2), 1.0), DomainError);
}

TEST(Adjoint, InvertsCircuit) {
  std::mt19937_64 rng(3);
  const Circuit c = testing::random_circuit(4, 20, rng);
  const Circuit b = lca::bind(c, testing::random_angles(c.param_count, rng));
  Circuit both(4);
  append(both, b);
  append(both, adjoint(b));
  EXPECT_LT((testing::dense_circuit(both) - testing::Mat::Identity(16, 16)).norm(), 1e-12);
}

TEST(GateCount, TwoQubitCounts) {
  Circuit c(3);
  for (int k = 0; k < 4; ++k) c.add(GateOp::fixed(GateKind::RX, {k % 3}, 0.1));
  for (int k = 0; k < 3; ++k) c.add(GateOp::plain(GateKind::CNOT, {k % 3, (k + 1) % 3}));
  c.add(GateOp::phase_on_zeros(3, 1.0));
  EXPECT_EQ(count_two_qubit(c), 3);
  EXPECT_EQ(count_two_qubit(Circuit(3)), 0);
  const Circuit t1 = shipped_library().instantiate(2, 4, 1);
  const Circuit t2 = shipped_library().instantiate(2, 4, 2);
  int cnots = 0;
  for (const auto& g : t1.gates) cnots += g.kind == GateKind::CNOT;
  EXPECT_EQ(count_two_qubit(t2), 2 * cnots);
}

TEST(GateCost, HadamardTestArithmetic) {
  GateCostModel m;
  Circuit c(4);
  for (int k = 0; k < 4; ++k) c.add(GateOp::fixed(GateKind::RY, {k}, 0.2));
  for (int k = 0; k < 3; ++k) c.add(GateOp::plain(GateKind::CNOT, {k, k + 1}));
  std::vector<Circuit> one{c};
  EXPECT_EQ(ht_two_qubit_cost(one, m), 19);
  std::vector<Circuit> two{c, c};
  EXPECT_EQ(ht_two_qubit_cost(two, m), 38);
  std::vector<Circuit> empty_circuit{Circuit(4)};
  EXPECT_EQ(ht_two_qubit_cost(empty_circuit, m), 0);
  EXPECT_THROW(ht_two_qubit_cost(std::vector<Circuit>{}, m), DomainError);
}

TEST(GateCost, PcmArithmetic) {
  GateCostModel m;
  EXPECT_EQ(m.mcphase_cost(3), m.toffoli_2q_cost);
  EXPECT_EQ(m.mcphase_cost(3), 5);
  EXPECT_EQ(m.mcphase_cost(2), 1);
  EXPECT_EQ(m.mcphase_cost(1), 0);
  EXPECT_EQ(m.mcphase_cost(4), 13);
  std::vector<Circuit> four(4, Circuit(3));
  for (int k = 0; k < 12; ++k) four[k % 4].add(GateOp::plain(GateKind::CNOT, {0, 1}));
  four[2].add(GateOp::phase_on_zeros(3, M_PI));
  EXPECT_EQ(pcm_two_qubit_cost(four, 3, m), 17);
  std::vector<Circuit> phase_only{Circuit(2)};
  phase_only[0].add(GateOp::phase_on_zeros(2, M_PI));
  EXPECT_EQ(pcm_two_qubit_cost(phase_only, 2, m), 1);
  EXPECT_THROW(pcm_two_qubit_cost(std::vector<Circuit>{}, 2, m), DomainError);
  EXPECT_NO_THROW(m.validate());
}

TEST(GateCost, CustomModel) {
  const auto m = GateCostModel::from_json(R"({"mcphase_table":{"1":0,"2":1,"3":5,"4":9},"quadratic":[1,0,0]})");
  EXPECT_EQ(m.mcphase_cost(4), 9);
  EXPECT_EQ(m.mcphase_cost(6), 36);
  EXPECT_THROW(GateCostModel::from_json(R"({"mcphase_table":{"3":4}})"), ValidationError);
  EXPECT_THROW(GateCostModel::from_json(R"({"quadratic":[-1,0,100]})"), ValidationError);
  EXPECT_THROW(GateCostModel::from_json("[1,2"), ParseError);
}

TEST(GateCost, MonotoneInDepthAndList) {
  GateCostModel m;
  for (int n = 4; n <= 10; ++n) {
    int prev_ht = -1, prev_pcm = -1;
    for (int d = 1; d <= 6; ++d) {
      const auto row = cross_term_costs(shipped_library(), 2, 15, n, d, m);
      EXPECT_GE(row.ht_cost, prev_ht);
      EXPECT_GE(row.pcm_cost, prev_pcm);
      prev_ht = row.ht_cost;
      prev_pcm = row.pcm_cost;
    }
  }
  const Circuit t = shipped_library().instantiate(3, 4, 1);
  const Circuit c = lca::bind(t, std::vector<double>(static_cast<std::size_t>(t.param_count), 0.1));
  std::vector<Circuit> list;
  int prev = 0;
  for (int k = 0; k < 4; ++k) {
    list.push_back(c);
    const int cost = ht_two_qubit_cost(list, m);
    EXPECT_GE(cost, prev);
    prev = cost;
  }
}

TEST(GateCost, CrossoverAtDepthThree) {
  GateCostModel m;
  for (int n = 4; n <= 20; ++n)
    for (int d = 3; d <= 8; ++d) {
      const auto row = cross_term_costs(shipped_library(), 2, 15, n, d, m);
      EXPECT_LT(row.pcm_cost, row.ht_cost) << "n " << n << " d " << d;
    }
}

}  // namespace
}  // namespace lca
