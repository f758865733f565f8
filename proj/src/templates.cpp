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

#include "lca/templates.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lca/error.hpp"

namespace lca {
namespace {

using nlohmann::json;

constexpr std::pair<QubitPattern, std::string_view> kPatternNames[] = {
    {QubitPattern::Each, "each"},           {QubitPattern::Chain, "chain"},
    {QubitPattern::ChainRev, "chain_rev"},  {QubitPattern::Ring, "ring"},
    {QubitPattern::RingRev, "ring_rev"},    {QubitPattern::RingBack, "ring_back"},
    {QubitPattern::AllPairs, "all_pairs"},  {QubitPattern::EvenPairs, "even_pairs"},
    {QubitPattern::OddPairs, "odd_pairs"},  {QubitPattern::OddPairQubits, "odd_pair_qubits"},
    {QubitPattern::Fixed, "fixed"},
};

int pattern_arity(QubitPattern p) {
  switch (p) {
    case QubitPattern::Each:
    case QubitPattern::OddPairQubits:
      return 1;
    case QubitPattern::Fixed:
      return -1;
    default:
      return 2;
  }
}

LayerEntry parse_entry(const json& j, int id) {
  const std::string ctx = "template " + std::to_string(id) + ": ";
  if (!j.is_object() || !j.contains("gate")) throw ParseError(ctx + "layer entry needs a 'gate'");
  LayerEntry e;
  e.kind = gate_kind_from_string(j.at("gate").get<std::string>());
  if (e.kind == GateKind::Pauli) {
    if (!j.contains("pauli")) throw ParseError(ctx + "PAULI entry needs a 'pauli' axis");
    std::string axis = j.at("pauli").get<std::string>();
    if (axis.size() != 1) throw ParseError(ctx + "bad Pauli axis");
    e.pauli = pauli_from_char(axis[0]);
  }
  if (e.kind == GateKind::PhaseOnZeros)
    throw ValidationError(ctx + "PHASE_ON_ZEROS is not allowed inside ansatz templates");

  const json& pat = j.contains("pattern") ? j.at("pattern") : json();
  if (pat.is_string()) {
    e.pattern = qubit_pattern_from_string(pat.get<std::string>());
    if (e.pattern == QubitPattern::Fixed) throw ParseError(ctx + "'fixed' pattern needs tuples");
  } else if (pat.is_object() && pat.contains("fixed")) {
    e.pattern = QubitPattern::Fixed;
    e.fixed = pat.at("fixed").get<std::vector<std::vector<int>>>();
  } else {
    throw ParseError(ctx + "layer entry needs a 'pattern'");
  }

  const int want = pattern_arity(e.pattern);
  if (want > 0 && want != arity(e.kind))
    throw ValidationError(ctx + std::string(to_string(e.kind)) + " cannot use pattern '" +
                          std::string(to_string(e.pattern)) + "'");
  for (const auto& tuple : e.fixed)
    if (static_cast<int>(tuple.size()) != arity(e.kind))
      throw ValidationError(ctx + "fixed tuple size does not match gate arity");

  if (j.contains("param")) {
    const json& p = j.at("param");
    if (!is_rotation(e.kind)) throw ValidationError(ctx + "non-rotation gate with a 'param'");
    if (p.is_string() && p.get<std::string>() == "slot") {
      e.trainable = true;
    } else if (p.is_number()) {
      e.angle = p.get<double>();
    } else {
      throw ParseError(ctx + "'param' must be \"slot\" or a number");
    }
  } else if (is_rotation(e.kind)) {
    throw ValidationError(ctx + "rotation entry needs a 'param'");
  }
  return e;
}

AnsatzSpec parse_spec(const json& j) {
  if (!j.is_object() || !j.contains("id") || !j.contains("layer"))
    throw ParseError("template entry needs 'id' and 'layer'");
  AnsatzSpec s;
  s.id = j.at("id").get<int>();
  s.name = j.value("name", std::string());
  s.catalog_circuit = j.value("catalog_circuit", 0);
  if (!j.at("layer").is_array() || j.at("layer").empty())
    throw ParseError("template " + std::to_string(s.id) + ": empty layer");
  for (const json& e : j.at("layer")) s.layer.push_back(parse_entry(e, s.id));
  return s;
}

void check_instantiable(const AnsatzSpec& s) {
  // Patterns are defined for every Q >= 2; explicit tuples are the only way
  // to reference a qubit that may not exist.
  for (const LayerEntry& e : s.layer)
    for (const auto& tuple : e.fixed)
      for (int q : tuple)
        if (q < 0 || q >= 2)
          throw ValidationError("template " + std::to_string(s.id) +
                                ": fixed qubit index " + std::to_string(q) +
                                " is not available at Q = 2");
  for (int q = 2; q <= 5; ++q) {
    Circuit c = s.one_layer(q);
    try {
      c.validate();
    } catch (const ValidationError& err) {
      throw ValidationError("template " + std::to_string(s.id) + " at Q=" + std::to_string(q) +
                            ": " + err.what());
    }
  }
}

}  // namespace

std::string_view to_string(QubitPattern p) {
  for (const auto& [k, name] : kPatternNames)
    if (k == p) return name;
  return "?";
}

QubitPattern qubit_pattern_from_string(std::string_view name) {
  for (const auto& [k, n] : kPatternNames)
    if (n == name) return k;
  throw ParseError("unknown qubit pattern '" + std::string(name) + "'");
}

std::vector<std::vector<int>> expand_pattern(QubitPattern pattern, int n,
                                             const std::vector<std::vector<int>>& fixed) {
  std::vector<std::vector<int>> out;
  auto ring_pair = [&](int a, int b) {
    // At Q = 2 the wrap-around bond coincides with the forward bond.
    if (n == 2 && !out.empty()) return;
    out.push_back({a, b});
  };
  switch (pattern) {
    case QubitPattern::Each:
      for (int i = 0; i < n; ++i) out.push_back({i});
      break;
    case QubitPattern::Chain:
      for (int i = 0; i + 1 < n; ++i) out.push_back({i, i + 1});
      break;
    case QubitPattern::ChainRev:
      for (int i = n - 2; i >= 0; --i) out.push_back({i + 1, i});
      break;
    case QubitPattern::Ring:
      for (int i = 0; i < n; ++i) ring_pair(i, (i + 1) % n);
      break;
    case QubitPattern::RingRev:
      for (int i = n - 1; i >= 0; --i) ring_pair(i, (i + 1) % n);
      break;
    case QubitPattern::RingBack:
      for (int k = 0; k < n; ++k) ring_pair((k + n - 1) % n, (k + n - 2) % n);
      break;
    case QubitPattern::AllPairs:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.push_back({i, j});
      break;
    case QubitPattern::EvenPairs:
      for (int k = 0; 2 * k + 1 < n; ++k) out.push_back({2 * k + 1, 2 * k});
      break;
    case QubitPattern::OddPairs:
      for (int k = 0; 2 * k + 2 < n; ++k) out.push_back({2 * k + 2, 2 * k + 1});
      break;
    case QubitPattern::OddPairQubits:
      for (int k = 0; 2 * k + 2 < n; ++k) {
        out.push_back({2 * k + 1});
        out.push_back({2 * k + 2});
      }
      break;
    case QubitPattern::Fixed:
      out = fixed;
      break;
  }
  return out;
}

Circuit AnsatzSpec::one_layer(int n_qubits) const {
  Circuit c(n_qubits);
  c.template_id = id;
  int slot = 0;
  for (const LayerEntry& e : layer) {
    for (auto& qubits : expand_pattern(e.pattern, n_qubits, e.fixed)) {
      GateOp g = GateOp::plain(e.kind, std::move(qubits));
      g.pauli = e.pauli;
      if (e.trainable) g.slot = slot++;
      g.angle = e.angle;
      c.gates.push_back(std::move(g));
    }
  }
  c.param_count = slot;
  return c;
}

AnsatzLibrary AnsatzLibrary::parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("ansatz library: ") + e.what());
  }
  AnsatzLibrary lib;
  try {
    if (!doc.is_object() || !doc.contains("templates") || !doc.at("templates").is_array())
      throw ParseError("ansatz library: missing 'templates' array");
    auto ingest = [&](const json& arr, std::map<int, AnsatzSpec>& into) {
      for (const json& t : arr) {
        AnsatzSpec s = parse_spec(t);
        if (lib.catalog_.count(s.id) || lib.auxiliary_.count(s.id))
          throw ParseError("ansatz library: duplicate template id " + std::to_string(s.id));
        check_instantiable(s);
        into.emplace(s.id, std::move(s));
      }
    };
    ingest(doc.at("templates"), lib.catalog_);
    if (doc.contains("auxiliary")) ingest(doc.at("auxiliary"), lib.auxiliary_);
  } catch (const json::exception& e) {
    throw ParseError(std::string("ansatz library: ") + e.what());
  }
  return lib;
}

AnsatzLibrary AnsatzLibrary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read ansatz library '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<int> AnsatzLibrary::ids() const {
  std::vector<int> out;
  for (const auto& [id, _] : catalog_) out.push_back(id);
  return out;
}

std::vector<int> AnsatzLibrary::auxiliary_ids() const {
  std::vector<int> out;
  for (const auto& [id, _] : auxiliary_) out.push_back(id);
  return out;
}

bool AnsatzLibrary::contains(int id) const {
  return catalog_.count(id) > 0 || auxiliary_.count(id) > 0;
}

const AnsatzSpec& AnsatzLibrary::spec(int id) const {
  if (auto it = catalog_.find(id); it != catalog_.end()) return it->second;
  if (auto it = auxiliary_.find(id); it != auxiliary_.end()) return it->second;
  throw DomainError("unknown ansatz id " + std::to_string(id));
}

Circuit AnsatzLibrary::instantiate(int id, int n_qubits, int layers) const {
  const AnsatzSpec& s = spec(id);
  if (n_qubits < 2) throw DomainError("instantiate: templates need Q >= 2");
  if (layers < 1) throw DomainError("instantiate: layers must be >= 1");
  const Circuit one = s.one_layer(n_qubits);
  Circuit c(n_qubits);
  c.template_id = id;
  c.layers = layers;
  c.param_count = one.param_count * layers;
  c.gates.reserve(one.gates.size() * static_cast<std::size_t>(layers));
  for (int k = 0; k < layers; ++k) {
    for (GateOp g : one.gates) {
      if (g.slot) g.slot = *g.slot + k * one.param_count;
      c.gates.push_back(std::move(g));
    }
  }
  return c;
}

std::filesystem::path default_library_path() {
  if (const char* env = std::getenv("LCA_LIBRARY")) return env;
  return LCA_DEFAULT_LIBRARY;
}

}  // namespace lca
