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


// Command-line experiment runner. Every run writes manifest.json into the
// output directory before any result file.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lca/eigen_oracle.hpp"
#include "lca/error.hpp"
#include "lca/expressibility.hpp"
#include "lca/gate_cost.hpp"
#include "lca/lca.hpp"
#include "lca/pcm.hpp"
#include "lca/rng.hpp"
#include "lca/templates.hpp"
#include "lca/vqe.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

/// Raised for invalid user input; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    out += buf;
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

/// Parses "4", "4,6,8", "1..8" and mixtures such as "1,3..5".
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ConfigError("empty entry in list '" + text + "'");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    const int lo = parse_int(item.substr(0, dots));
    const int hi = parse_int(item.substr(dots + 2));
    if (hi < lo) throw ConfigError("descending range '" + item + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::string join_ints(const std::vector<int>& v, char sep) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += sep;
    s += std::to_string(v[k]);
  }
  return s;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return lca::format_double(v.get<double>());
  throw ConfigError("unsupported config value " + v.dump());
}

/// Shared state of one invocation.
struct Run {
  std::vector<std::string> argv;
  std::string config_path;
  std::string out_dir = "results";
  std::string library_path;
  CLI::App* leaf = nullptr;
  std::string command;
  std::function<void()> on_start;

  /// Fills options of the active subcommand that were not given on the
  /// command line from the JSON config. Keys may be flat or nested under
  /// the command path, e.g. {"expr": {"single": {"qubits": 4}}}.
  void apply_config() {
    if (config_path.empty()) return;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(config_path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config " + config_path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    nlohmann::json section = doc;
    std::vector<std::string> path;
    for (CLI::App* a = leaf; a->get_parent() != nullptr; a = a->get_parent())
      path.insert(path.begin(), a->get_name());
    bool nested = true;
    for (const std::string& p : path) {
      if (!section.is_object() || !section.contains(p)) {
        nested = false;
        break;
      }
      section = section.at(p);
    }
    if (!nested) section = doc;
    if (!section.is_object()) throw ConfigError("config section must be an object");
    for (const auto& [key, value] : section.items()) {
      if (!nested && !path.empty() && key == path.front()) continue;
      if (key == "config") throw ConfigError("config files cannot nest --config");
      CLI::Option* opt = leaf->get_option_no_throw("--" + key);
      if (opt == nullptr) throw ConfigError("unknown config key '" + key + "'");
      if (opt->count() > 0) continue;
      std::string text;
      if (value.is_array()) {
        for (std::size_t k = 0; k < value.size(); ++k) {
          if (k) text += ',';
          text += json_scalar(value[k]);
        }
      } else {
        text = json_scalar(value);
      }
      opt->add_result(text);
      try {
        opt->run_callback();
      } catch (const CLI::Error& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
      }
    }
  }

  /// Every option of the active subcommand with its effective value.
  json snapshot() const {
    json options = json::object();
    for (const CLI::Option* opt : leaf->get_options()) {
      const std::string name = opt->get_single_name();
      if (name == "help" || name == "config") continue;
      std::string value;
      if (opt->get_expected_min() == 0) {
        const bool on = opt->count() > 0 ? opt->as<bool>() : opt->get_default_str() == "true";
        value = on ? "true" : "false";
      } else if (opt->count() > 0) {
        const auto& res = opt->results();
        for (std::size_t k = 0; k < res.size(); ++k) value += (k ? "," : "") + res[k];
      } else {
        value = opt->get_default_str();
      }
      options[name] = value;
    }
    json snap;
    snap["command"] = command;
    snap["options"] = options;
    snap["library"] = library_path;
    return snap;
  }

  fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }

  void write_manifest(std::uint64_t seed, const std::vector<std::string>& outputs) const {
    if (on_start) on_start();
    fs::create_directories(out_dir);
    const json snap = snapshot();
    json m;
    std::string cmdline;
    for (std::size_t k = 0; k < argv.size(); ++k) cmdline += (k ? " " : "") + argv[k];
    m["command_line"] = cmdline;
    m["config"] = snap;
    m["config_digest"] = sha256_hex(snap.dump());
    m["seed"] = seed;
    m["library_path"] = library_path;
    m["library_sha256"] = sha256_hex(read_file(library_path));
    m["version"] = LCA_VERSION;
    m["timestamp"] = utc_timestamp();
    json outs = json::array();
    for (const std::string& o : outputs) outs.push_back(out(o).string());
    m["outputs"] = outs;
    std::ofstream f(out("manifest.json"));
    f << m.dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write manifest");
  }
};

std::ofstream open_output(const Run& run, const std::string& name) {
  std::ofstream f(run.out(name), std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + run.out(name).string());
  return f;
}

void write_json(const Run& run, const std::string& name, const json& doc) {
  std::ofstream f = open_output(run, name);
  f << doc.dump(2) << '\n';
}

lca::AnsatzLibrary load_library(const Run& run) {
  return lca::AnsatzLibrary::load(run.library_path);
}

void require_ids(const lca::AnsatzLibrary& lib, const std::vector<int>& ids) {
  for (int id : ids)
    if (!lib.contains(id)) throw ConfigError("unknown template id " + std::to_string(id));
}

// ---------------------------------------------------------------- expr

struct ExprArgs {
  int circuit = 10;
  std::string qubits = "4";
  std::string layers = "1";
  std::string set;
  std::int64_t pairs = 5000;
  std::uint64_t seed = 0;
  std::string binning = "unfixed";
  int n_bin = 75;
  double angle_range = 4.0 * std::numbers::pi;
  std::string coeffs = "ones";
  bool members = false;
  bool histogram = false;
  double tolerance = 0.1;
  int max_m = 14;
  int trials = 5;
  double epsilon = 0.05;
  double significance = 3.0;
};

lca::ExprOptions expr_options(const ExprArgs& a) {
  lca::ExprOptions o;
  if (a.pairs < 1) throw ConfigError("--pairs must be >= 1");
  if (a.n_bin < 2) throw ConfigError("--n-bin must be >= 2");
  if (!(a.angle_range > 0.0)) throw ConfigError("--angle-range must be positive");
  o.pairs = a.pairs;
  o.seed = a.seed;
  o.n_bin = a.n_bin;
  o.angle_range = a.angle_range;
  o.binning = lca::binning_from_string(a.binning);
  o.c_mode = lca::coefficient_mode_from_string(a.coeffs);
  return o;
}

void check_qubits(const std::vector<int>& qs) {
  for (int q : qs)
    if (q < 2 || q > 24) throw ConfigError("qubit count out of range 2..24: " + std::to_string(q));
}

int single_value(const std::vector<int>& v, const char* what) {
  if (v.size() != 1) throw ConfigError(std::string(what) + " takes a single value here");
  return v.front();
}

std::string expr_row(const char* kind, const std::vector<int>& ids, int q, int l,
                     const lca::ExprResult& r) {
  std::ostringstream os;
  os << kind << ',' << join_ints(ids, ' ') << ',' << q << ',' << l << ',' << r.pairs << ','
     << lca::to_string(r.binning) << ',' << r.n_bin << ',' << r.seed << ','
     << lca::format_double(r.d_kl) << '\n';
  return os.str();
}

constexpr const char* kExprHeader = "kind,ids,Q,L,pairs,binning,n_bin,seed,d_kl\n";

int cmd_expr_single(Run& run, const ExprArgs& a) {
  const lca::ExprOptions o = expr_options(a);
  const int q = single_value(parse_int_list(a.qubits), "--qubits");
  const int l = single_value(parse_int_list(a.layers), "--layers");
  check_qubits({q});
  const lca::AnsatzLibrary lib = load_library(run);
  require_ids(lib, {a.circuit});
  (void)lib.instantiate(a.circuit, q, l);
  std::vector<std::string> outs{"expr.csv"};
  if (a.histogram) outs.push_back("histogram.csv");
  run.write_manifest(a.seed, outs);

  const lca::ExprResult r = lca::expr_single(lib, a.circuit, q, l, o);
  std::ofstream f = open_output(run, "expr.csv");
  f << kExprHeader << expr_row("single", {a.circuit}, q, l, r);
  if (a.histogram) {
    std::ofstream h = open_output(run, "histogram.csv");
    lca::write_histogram_csv(h, r.histogram);
  }
  return kExitOk;
}

int cmd_expr_lca(Run& run, const ExprArgs& a) {
  const lca::ExprOptions o = expr_options(a);
  const int q = single_value(parse_int_list(a.qubits), "--qubits");
  const int l = single_value(parse_int_list(a.layers), "--layers");
  check_qubits({q});
  if (a.set.empty()) throw ConfigError("--set is required");
  const std::vector<int> ids = parse_int_list(a.set);
  const lca::AnsatzLibrary lib = load_library(run);
  require_ids(lib, ids);
  const lca::LcaConfig cfg = lca::LcaConfig::from_library(lib, ids, q, l);
  std::vector<std::string> outs{"expr.csv"};
  if (a.members) outs.push_back("summary.json");
  if (a.histogram) outs.push_back("histogram.csv");
  run.write_manifest(a.seed, outs);

  const lca::ExprResult r = lca::expr_lca(cfg, o);
  std::ofstream f = open_output(run, "expr.csv");
  f << kExprHeader << expr_row("lca", ids, q, l, r);
  if (a.members) {
    std::vector<double> member_d;
    for (int id : ids) {
      const lca::ExprResult m = lca::expr_single(lib, id, q, l, o);
      member_d.push_back(m.d_kl);
      f << expr_row("member", {id}, q, l, m);
    }
    json s;
    s["d_kl_lca"] = r.d_kl;
    s["d_kl_members"] = member_d;
    s["improvement_R"] = lca::improvement_R(r.d_kl, member_d);
    write_json(run, "summary.json", s);
  }
  if (a.histogram) {
    std::ofstream h = open_output(run, "histogram.csv");
    lca::write_histogram_csv(h, r.histogram);
  }
  return kExitOk;
}

int cmd_expr_depth_scan(Run& run, const ExprArgs& a) {
  const lca::ExprOptions o = expr_options(a);
  const std::vector<int> qs = parse_int_list(a.qubits);
  const std::vector<int> ls = parse_int_list(a.layers);
  check_qubits(qs);
  if (!(a.tolerance > 0.0)) throw ConfigError("--tolerance must be positive");
  const lca::AnsatzLibrary lib = load_library(run);
  require_ids(lib, {a.circuit});
  for (int q : qs)
    for (int l : ls) (void)lib.instantiate(a.circuit, q, l);
  run.write_manifest(a.seed, {"scan.csv", "fit.json"});

  std::vector<lca::ScanRow> all;
  std::vector<std::pair<int, int>> thresholds;
  json th = json::array();
  for (int q : qs) {
    const std::vector<lca::ScanRow> rows = lca::depth_scan(lib, a.circuit, q, ls, o);
    const int lth = lca::threshold_layer(rows, a.tolerance);
    thresholds.emplace_back(q, lth);
    th.push_back({{"Q", q}, {"L_th", lth}});
    all.insert(all.end(), rows.begin(), rows.end());
  }
  std::ofstream f = open_output(run, "scan.csv");
  lca::write_scan_csv(f, all);
  json fit;
  fit["circuit"] = a.circuit;
  fit["thresholds"] = th;
  if (qs.size() >= 2) {
    const lca::LinearFit lf = lca::fit_threshold(thresholds);
    fit["a"] = lf.a;
    fit["b"] = lf.b;
  } else {
    fit["a"] = nullptr;
    fit["b"] = nullptr;
  }
  write_json(run, "fit.json", fit);
  return kExitOk;
}

int cmd_expr_count_scan(Run& run, const ExprArgs& a) {
  const lca::ExprOptions o = expr_options(a);
  const std::vector<int> qs = parse_int_list(a.qubits);
  const int l = single_value(parse_int_list(a.layers), "--layers");
  check_qubits(qs);
  if (a.trials < 1) throw ConfigError("--trials must be >= 1");
  if (a.significance < 0.0) throw ConfigError("--significance must be >= 0");
  const lca::AnsatzLibrary lib = load_library(run);
  if (a.max_m < 1 || a.max_m > static_cast<int>(lib.ids().size()))
    throw ConfigError("--max-m must lie in 1.." + std::to_string(lib.ids().size()));
  run.write_manifest(a.seed, {"scan.csv", "saturation.csv", "saturation.json"});

  std::vector<lca::ScanRow> all;
  std::ostringstream sat;
  sat << "Q,trial,M_c,order\n";
  json summary = json::array();
  for (int q : qs) {
    const lca::CountScan scan = lca::count_scan(lib, q, l, a.max_m, a.trials, o, a.epsilon,
                                                 a.significance);
    all.insert(all.end(), scan.rows.begin(), scan.rows.end());
    double mean = 0.0;
    for (int t = 0; t < a.trials; ++t) {
      const auto ut = static_cast<std::size_t>(t);
      sat << q << ',' << t << ',' << scan.saturation[ut] << ',' << join_ints(scan.orders[ut], ' ')
          << '\n';
      mean += scan.saturation[ut];
    }
    summary.push_back({{"Q", q}, {"mean_M_c", mean / a.trials}, {"M_c", scan.saturation}});
  }
  std::ofstream f = open_output(run, "scan.csv");
  lca::write_scan_csv(f, all, true);
  std::ofstream s = open_output(run, "saturation.csv");
  s << sat.str();
  write_json(run, "saturation.json", summary);
  return kExitOk;
}

// ---------------------------------------------------------------- vqe

struct VqeArgs {
  std::string model = "xy";
  int n = 4;
  double j_xx = 1.0, j_yy = 1.0, j_x = 0.5, j_z = 0.5;
  std::string set = "2,9";
  int layers = 1;
  double lr = 0.05;
  int steps = 2000;
  std::string mode = "exact";
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  int restarts = 1;
  bool oracle = true;
  bool baselines = true;
};

struct TrainOutcome {
  lca::TrainTrace best;
  std::vector<double> finals;
};

TrainOutcome train_restarts(const lca::LcaConfig& cfg, const lca::PauliSum& h,
                            const lca::OptimizerConfig& base, int restarts) {
  TrainOutcome out;
  for (int r = 0; r < restarts; ++r) {
    lca::OptimizerConfig opt = base;
    opt.seed = lca::derive_seed(base.seed, {static_cast<std::uint64_t>(r)});
    opt.eval.seed = opt.seed;
    lca::TrainTrace t = lca::train(cfg, h, opt);
    out.finals.push_back(t.final_energy);
    if (r == 0 || t.final_energy < out.best.final_energy) out.best = std::move(t);
  }
  return out;
}

json params_json(const lca::LcaParams& p) {
  json c = json::array();
  for (Eigen::Index k = 0; k < p.c.size(); ++k) c.push_back({p.c[k].real(), p.c[k].imag()});
  return {{"c", c}, {"thetas", p.thetas}};
}

int cmd_vqe_run(Run& run, const VqeArgs& a) {
  if (a.model != "xy") throw ConfigError("unknown model '" + a.model + "'");
  if (a.n < 2) throw ConfigError("--n must be >= 2");
  if (a.oracle && a.n > lca::kOracleMaxQubits)
    throw ConfigError("--n " + std::to_string(a.n) + " exceeds the dense oracle limit of " +
                      std::to_string(lca::kOracleMaxQubits) + " qubits");
  if (a.n > 24) throw ConfigError("--n exceeds the simulator limit of 24 qubits");
  if (a.steps < 0) throw ConfigError("--steps must be >= 0");
  if (!(a.lr >= 0.0) || !std::isfinite(a.lr)) throw ConfigError("--lr must be finite and >= 0");
  if (a.restarts < 1) throw ConfigError("--restarts must be >= 1");
  if (a.shots < 0) throw ConfigError("--shots must be >= 0");
  const std::vector<int> ids = parse_int_list(a.set);
  const lca::AnsatzLibrary lib = load_library(run);
  require_ids(lib, ids);
  const lca::LcaConfig cfg = lca::LcaConfig::from_library(lib, ids, a.n, a.layers);
  const lca::PauliSum h = lca::xy_hamiltonian({a.n, a.j_xx, a.j_yy, a.j_x, a.j_z});

  lca::OptimizerConfig opt;
  opt.learning_rate = a.lr;
  opt.steps = a.steps;
  opt.seed = a.seed;
  opt.eval.mode = lca::cost_mode_from_string(a.mode);
  if (a.shots > 0) {
    if (opt.eval.mode != lca::CostMode::Pcm) throw ConfigError("--shots requires --mode pcm");
    opt.eval.pcm.mode = lca::PcmMode::Shots;
    opt.eval.pcm.shots = a.shots;
  }
  opt.eval.pcm.validate();

  std::vector<std::string> outs{"trace.csv"};
  if (a.baselines)
    for (std::size_t k = 0; k < ids.size(); ++k)
      outs.push_back("trace_member_" + std::to_string(k) + ".csv");
  outs.push_back("final.json");
  run.write_manifest(a.seed, outs);

  const TrainOutcome lca_run = train_restarts(cfg, h, opt, a.restarts);
  {
    std::ofstream f = open_output(run, "trace.csv");
    lca::write_trace_csv(f, lca_run.best);
  }
  json fin;
  fin["lca"] = {{"ids", ids},
                {"final_energy", lca_run.best.final_energy},
                {"restart_energies", lca_run.finals},
                {"params", params_json(lca_run.best.final_params)}};
  std::vector<double> member_e;
  if (a.baselines) {
    json mem = json::array();
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const std::vector<int> one{ids[k]};
      const lca::LcaConfig mc = lca::LcaConfig::from_library(lib, one, a.n, a.layers);
      const TrainOutcome m = train_restarts(mc, h, opt, a.restarts);
      std::ofstream f = open_output(run, "trace_member_" + std::to_string(k) + ".csv");
      lca::write_trace_csv(f, m.best);
      member_e.push_back(m.best.final_energy);
      mem.push_back({{"id", ids[k]},
                     {"final_energy", m.best.final_energy},
                     {"restart_energies", m.finals}});
    }
    fin["members"] = mem;
  }
  if (a.oracle) {
    const double ground = lca::min_eigenvalue(h, a.n);
    fin["ground_energy"] = ground;
    if (!member_e.empty()) {
      const double best = *std::min_element(member_e.begin(), member_e.end());
      if (best != ground)
        fin["improvement_L"] = lca::improvement_L(lca_run.best.final_energy, member_e, ground);
      else
        fin["improvement_L"] = nullptr;
    }
  }
  write_json(run, "final.json", fin);
  return kExitOk;
}

// ---------------------------------------------------------------- pcm

struct PcmArgs {
  int qubits = 3;
  std::string set = "2,9";
  int layers = 1;
  int trials = 50;
  std::uint64_t seed = 0;
  std::int64_t shots = 0;
  bool adversarial = false;
  bool reanchor = false;
  double threshold = 1e-8;
};

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

int cmd_pcm_validate(Run& run, const PcmArgs& a) {
  if (a.trials < 1) throw ConfigError("--trials must be >= 1");
  if (a.shots < 0) throw ConfigError("--shots must be >= 0");
  check_qubits({a.qubits});
  const std::vector<int> ids = parse_int_list(a.set);
  const lca::AnsatzLibrary lib = load_library(run);
  require_ids(lib, ids);
  lca::LcaConfig cfg = lca::LcaConfig::from_library(lib, ids, a.qubits, a.layers);
  if (a.adversarial) {
    // The anchor is the reference itself and the next member flips qubit 0,
    // so their overlap vanishes.
    lca::Circuit empty(a.qubits);
    lca::Circuit flip(a.qubits);
    flip.add(lca::GateOp::plain(lca::GateKind::X, {0}));
    cfg.members.insert(cfg.members.begin(), {empty, flip});
    cfg.ids.insert(cfg.ids.begin(), {0, 0});
  }
  const lca::PauliSum h = lca::xy_hamiltonian({a.qubits});
  lca::PcmSettings settings;
  settings.reanchor = a.reanchor;
  if (a.shots > 0) {
    settings.mode = lca::PcmMode::Shots;
    settings.shots = a.shots;
  }
  settings.validate();
  run.write_manifest(a.seed, {"pcm_validate.csv", "pcm_summary.json"});

  std::ofstream f = open_output(run, "pcm_validate.csv");
  f << "trial,status,anchor,dev_S,dev_Hm,dev_energy,envelope\n";
  const double envelope = a.shots > 0 ? 1.0 / std::sqrt(static_cast<double>(a.shots)) : 0.0;
  int ok = 0, undefined = 0, unstable = 0, over = 0;
  double worst = 0.0;
  for (int t = 0; t < a.trials; ++t) {
    const auto ut = static_cast<std::uint64_t>(t);
    lca::LcaParams p = lca::initial_params(cfg, lca::derive_seed(a.seed, {0x7061ULL, ut}));
    lca::Rng rng = lca::make_stream(a.seed, {0x6365ULL, ut});
    std::normal_distribution<double> g;
    for (Eigen::Index k = 0; k < p.c.size(); ++k) p.c[k] = {g(rng), g(rng)};
    const std::uint64_t session_seed = lca::derive_seed(a.seed, {0x73686f74ULL, ut});
    f << t << ',';
    try {
      const lca::PcmRecord rec = lca::pcm_matrices(cfg, p, h, settings, session_seed);
      const std::vector<double> alpha = lca::gauge_phases(cfg, p, rec.anchor);
      lca::LcaConfig rephased = cfg;
      rephased.member_phases = alpha;
      const lca::OverlapMatrices ex = lca::build_matrices(rephased, p, h);
      std::vector<double> neg(alpha.size());
      for (std::size_t k = 0; k < alpha.size(); ++k) neg[k] = -alpha[k];
      const double e_pcm = lca::energy_pcm(cfg, p, h, settings, session_seed);
      const double e_ex = lca::energy_exact(cfg, lca::gauge_transform(p, neg), h);
      const double ds = max_abs_diff(rec.S, ex.S);
      const double dh = max_abs_diff(rec.Hm, ex.Hm);
      const double de = std::abs(e_pcm - e_ex);
      const double dev = std::max({ds, dh, de});
      worst = std::max(worst, dev);
      if (a.shots == 0 && dev > a.threshold) ++over;
      ++ok;
      f << "ok," << rec.anchor << ',' << lca::format_double(ds) << ',' << lca::format_double(dh)
        << ',' << lca::format_double(de) << ',' << lca::format_double(envelope) << '\n';
    } catch (const lca::GaugeUndefined&) {
      ++undefined;
      f << "gauge_undefined,,,,," << lca::format_double(envelope) << '\n';
    } catch (const lca::UnstableDivision&) {
      ++unstable;
      f << "unstable_division,,,,," << lca::format_double(envelope) << '\n';
    }
  }
  json s;
  s["trials"] = a.trials;
  s["ok"] = ok;
  s["gauge_undefined"] = undefined;
  s["unstable_division"] = unstable;
  s["max_deviation"] = worst;
  s["mode"] = a.shots > 0 ? "shots" : "exact";
  s["threshold"] = a.threshold;
  s["exceeding_threshold"] = over;
  if (a.shots > 0) s["envelope"] = envelope;
  write_json(run, "pcm_summary.json", s);
  if (over > 0) {
    std::cerr << "lca: " << over << " trial(s) deviate from the exact oracle by more than "
              << a.threshold << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- gates

struct GatesArgs {
  std::string set = "2,15";
  std::string qubits = "4..20";
  std::string depth = "1..6";
  std::string cost_model;
};

int cmd_gates_count(Run& run, const GatesArgs& a) {
  const std::vector<int> ids = parse_int_list(a.set);
  if (ids.size() != 2) throw ConfigError("--set takes exactly two template ids");
  const std::vector<int> qs = parse_int_list(a.qubits);
  const std::vector<int> ds = parse_int_list(a.depth);
  for (int q : qs)
    if (q < 2) throw ConfigError("qubit counts must be >= 2");
  for (int d : ds)
    if (d < 1) throw ConfigError("depths must be >= 1");
  lca::GateCostModel model;
  if (!a.cost_model.empty()) model = lca::GateCostModel::from_json(read_file(a.cost_model));
  model.validate();
  const lca::AnsatzLibrary lib = load_library(run);
  require_ids(lib, ids);
  run.write_manifest(0, {"gates.csv", "gates_summary.json"});

  const std::vector<lca::GateCountRow> rows =
      lca::gate_count_grid(lib, ids[0], ids[1], qs, ds, model);
  std::ofstream f = open_output(run, "gates.csv");
  f << "n,d,ht_cost,pcm_cost\n";
  for (const lca::GateCountRow& r : rows)
    f << r.n_qubits << ',' << r.depth << ',' << r.ht_cost << ',' << r.pcm_cost << '\n';
  // Smallest depth from which PCM is cheaper at every n and every larger depth.
  json crossover = nullptr;
  for (auto it = ds.rbegin(); it != ds.rend(); ++it) {
    bool all = true;
    for (const lca::GateCountRow& r : rows)
      if (r.depth == *it && r.pcm_cost >= r.ht_cost) all = false;
    if (!all) break;
    crossover = *it;
  }
  write_json(run, "gates_summary.json",
             {{"set", ids}, {"toffoli_2q_cost", model.toffoli_2q_cost}, {"crossover_depth", crossover}});
  return kExitOk;
}

// ---------------------------------------------------------------- manifest

int cmd_manifest_verify(const std::string& dir) {
  const json m = json::parse(read_file(fs::path(dir) / "manifest.json"));
  bool good = true;
  if (sha256_hex(m.at("config").dump()) != m.at("config_digest").get<std::string>()) {
    std::cerr << "config digest mismatch\n";
    good = false;
  }
  const std::string lib = m.at("library_path").get<std::string>();
  if (!fs::exists(lib) || sha256_hex(read_file(lib)) != m.at("library_sha256").get<std::string>()) {
    std::cerr << "library digest mismatch\n";
    good = false;
  }
  for (const auto& o : m.at("outputs")) {
    if (!fs::exists(o.get<std::string>())) {
      std::cerr << "missing output " << o.get<std::string>() << '\n';
      good = false;
    }
  }
  std::cout << (good ? "manifest ok" : "manifest invalid") << '\n';
  return good ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  Run run;
  run.argv.assign(argv, argv + argc);
  run.library_path = lca::default_library_path();

  CLI::App app{"Linear-combination-of-ansatz experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(LCA_VERSION));
  app.option_defaults()->always_capture_default();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", run.config_path, "JSON file supplying option values");
    sub->add_option("--out", run.out_dir, "Output directory");
    sub->add_option("--library", run.library_path, "Template library JSON");
  };

  ExprArgs ea;
  CLI::App* expr = app.add_subcommand("expr", "Expressibility experiments");
  expr->require_subcommand(1);
  auto expr_common = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--pairs", ea.pairs, "Sampled state pairs");
    sub->add_option("--seed", ea.seed, "Master seed");
    sub->add_option("--binning", ea.binning, "unfixed | fixed");
    sub->add_option("--n-bin", ea.n_bin, "Histogram bins");
    sub->add_option("--angle-range", ea.angle_range, "Angles drawn from [0, range)")
        ->default_str(lca::format_double(ea.angle_range));
    sub->add_option("--layers", ea.layers, "Layer count (range for depth-scan)");
    sub->add_option("--qubits", ea.qubits, "Qubit count (list for scans)");
  };
  CLI::App* single = expr->add_subcommand("single", "One ansatz");
  expr_common(single);
  single->add_option("--circuit", ea.circuit, "Template id");
  single->add_flag("--histogram", ea.histogram, "Also write histogram.csv");
  CLI::App* lcasub = expr->add_subcommand("lca", "Linear combination of ansatze");
  expr_common(lcasub);
  lcasub->add_option("--set", ea.set, "Comma-separated template ids");
  lcasub->add_option("--coeffs", ea.coeffs, "ones | sampled");
  lcasub->add_flag("--members", ea.members, "Also evaluate every member and improvement_R");
  lcasub->add_flag("--histogram", ea.histogram, "Also write histogram.csv");
  CLI::App* depth = expr->add_subcommand("depth-scan", "d_kl against layer count");
  expr_common(depth);
  depth->add_option("--circuit", ea.circuit, "Template id");
  depth->add_option("--tolerance", ea.tolerance, "Relative plateau tolerance for L_th");
  CLI::App* count = expr->add_subcommand("count-scan", "d_kl against ansatz count");
  expr_common(count);
  count->add_option("--max-m", ea.max_m, "Largest ansatz count");
  count->add_option("--trials", ea.trials, "Random insertion orders");
  count->add_option("--epsilon", ea.epsilon, "Saturation threshold on relative improvement");
  count->add_option("--significance", ea.significance,
                    "Standard errors an improvement must clear (0 = plain threshold)");
  count->add_option("--coeffs", ea.coeffs, "ones | sampled");

  VqeArgs va;
  CLI::App* vqe = app.add_subcommand("vqe", "Variational energy minimization");
  vqe->require_subcommand(1);
  CLI::App* vrun = vqe->add_subcommand("run", "Train an LCA and its members");
  common(vrun);
  vrun->add_option("--model", va.model, "Hamiltonian model (xy)");
  vrun->add_option("--n", va.n, "Sites");
  vrun->add_option("--jxx", va.j_xx, "XX coupling");
  vrun->add_option("--jyy", va.j_yy, "YY coupling");
  vrun->add_option("--jx", va.j_x, "X field");
  vrun->add_option("--jz", va.j_z, "Z field");
  vrun->add_option("--set", va.set, "Comma-separated template ids");
  vrun->add_option("--layers", va.layers, "Layers per member");
  vrun->add_option("--lr", va.lr, "Learning rate");
  vrun->add_option("--steps", va.steps, "Gradient steps");
  vrun->add_option("--mode", va.mode, "exact | pcm");
  vrun->add_option("--shots", va.shots, "Shots per PCM circuit (0 = exact expectations)");
  vrun->add_option("--seed", va.seed, "Master seed");
  vrun->add_option("--restarts", va.restarts, "Independent initializations; best is kept");
  vrun->add_flag("--oracle,!--no-oracle", va.oracle, "Compute the dense ground energy");
  vrun->add_flag("--baselines,!--no-baselines", va.baselines, "Train every member alone");

  PcmArgs pa;
  CLI::App* pcm = app.add_subcommand("pcm", "Phase-consistent measurement protocol");
  pcm->require_subcommand(1);
  CLI::App* pval = pcm->add_subcommand("validate", "Compare reconstructions with the exact oracle");
  common(pval);
  pval->add_option("--qubits", pa.qubits, "Qubits");
  pval->add_option("--set", pa.set, "Comma-separated template ids");
  pval->add_option("--layers", pa.layers, "Layers per member");
  pval->add_option("--trials", pa.trials, "Random trials");
  pval->add_option("--seed", pa.seed, "Master seed");
  pval->add_option("--shots", pa.shots, "Shots per circuit (0 = exact)");
  pval->add_option("--threshold", pa.threshold, "Exact-mode deviation limit");
  pval->add_flag("--adversarial", pa.adversarial, "Add a member orthogonal to the anchor");
  pval->add_flag("--reanchor", pa.reanchor, "Choose the best-conditioned anchor");

  GatesArgs ga;
  CLI::App* gates = app.add_subcommand("gates", "Two-qubit gate accounting");
  gates->require_subcommand(1);
  CLI::App* gcount = gates->add_subcommand("count", "Cross-term cost grid");
  common(gcount);
  gcount->add_option("--set", ga.set, "Template pair i,j");
  gcount->add_option("--qubits", ga.qubits, "Qubit range");
  gcount->add_option("--depth", ga.depth, "Depth range");
  gcount->add_option("--cost-model", ga.cost_model, "JSON cost model");

  std::string verify_dir;
  CLI::App* manifest = app.add_subcommand("manifest", "Run manifests");
  manifest->require_subcommand(1);
  CLI::App* verify = manifest->add_subcommand("verify", "Check digests and outputs");
  verify->add_option("dir", verify_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::vector<std::pair<CLI::App*, std::function<int()>>> table{
      {single, [&] { return cmd_expr_single(run, ea); }},
      {lcasub, [&] { return cmd_expr_lca(run, ea); }},
      {depth, [&] { return cmd_expr_depth_scan(run, ea); }},
      {count, [&] { return cmd_expr_count_scan(run, ea); }},
      {vrun, [&] { return cmd_vqe_run(run, va); }},
      {pval, [&] { return cmd_pcm_validate(run, pa); }},
      {gcount, [&] { return cmd_gates_count(run, ga); }},
      {verify, [&] { return cmd_manifest_verify(verify_dir); }},
  };

  bool started = false;
  try {
    for (const auto& [sub, fn] : table) {
      if (!sub->parsed()) continue;
      run.leaf = sub;
      for (CLI::App* a = sub; a->get_parent() != nullptr; a = a->get_parent())
        run.command = a->get_name() + (run.command.empty() ? "" : " " + run.command);
      if (sub != verify) run.apply_config();
      run.on_start = [&] { started = true; };
      return fn();
    }
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "lca: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lca::Error& e) {
    std::cerr << "lca: " << (started ? "error: " : "config error: ") << e.what() << '\n';
    return started ? kExitRuntime : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "lca: error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
