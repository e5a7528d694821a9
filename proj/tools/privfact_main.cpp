// Copyright 2026 The privfact Authors
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

// Command line front end: factorization norms, mechanism runs on synthetic
// data, lower bound certificates, sample-size search, and grid sweeps.
//
// Exit codes: 0 success, 1 certificate verification failure, 2 usage or
// input error, 3 search exhausted without reaching the target.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "privfact/errors.hpp"
#include "privfact/gamma2.hpp"
#include "privfact/io.hpp"
#include "privfact/lower_bounds.hpp"
#include "privfact/matrix.hpp"
#include "privfact/mech_central.hpp"
#include "privfact/mech_local.hpp"
#include "privfact/norms.hpp"
#include "privfact/rng.hpp"
#include "privfact/workloads.hpp"

namespace {

using nlohmann::json;
using namespace privfact;

// CSV fields must stay comma-free; workload names like "parities(4,2)" get
// their commas replaced so report rows keep a fixed column count.
std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',') c = ';';
  return s;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::kIoFailure, "cannot open " + path);
  out << text;
  require(out.good(), ErrorCode::kIoFailure, "write failed on " + path);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIoFailure, "cannot open " + path);
  json j = json::parse(in, nullptr, false);
  require(!j.is_discarded(), ErrorCode::kIoFailure, "invalid JSON in " + path);
  return j;
}

void emit_json(const json& j, const std::string& out_path) {
  std::string text = j.dump(2);
  text.push_back('\n');
  std::cout << text;
  if (!out_path.empty()) write_text_file(out_path, text);
}

double max_abs_residual(const Factorization& f) {
  if (f.r.rows() == 0 || f.a.rows() == 0) return 0.0;
  Matrix d = f.r * f.a;
  double m = 0.0;
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      m = std::max(m, std::fabs(d(i, j) - f.w_tilde(i, j)));
  return m;
}

// ---------------------------------------------------------------------------
// Mechanism construction. Four named mechanisms share one entry point:
//   central_gauss        identity reconstruction, R = I, A = W
//   binary_tree          dyadic tree factorization (thresholds only)
//   local_factorization  normalized tree (thresholds) or identity otherwise
//   data_independent     whitened factorization R = Sigma^{1/2},
//                        A = Sigma^{-1/2} W from the base noise covariance

bool is_thresholds_matrix(const Matrix& w) {
  if (w.rows() != w.cols()) return false;
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j)
      if (w(i, j) != (j <= i ? 1.0 : 0.0)) return false;
  return true;
}

bool is_power_of_two(int t) { return t >= 1 && (t & (t - 1)) == 0; }

Factorization identity_reconstruction(const Workload& w) {
  Factorization f;
  f.r = Matrix::identity(w.w.rows());
  f.a = w.w;
  f.w_tilde = w.w;
  f.kind = FactorKind::kInf;
  f.value = factorization_value(f.r, f.a, f.kind);
  return f;
}

Factorization tree_or_identity(const Workload& w) {
  if (is_thresholds_matrix(w.w) && is_power_of_two(w.w.cols()))
    return binary_tree_factorization(w.w.cols());
  return identity_reconstruction(w);
}

MechanismReport run_mechanism(const Workload& w, const std::string& mech,
                              long n, const PrivacyParams& p, int trials,
                              uint64_t seed, bool noiseless) {
  if (mech == "central_gauss") {
    return measure_error_central(identity_reconstruction(w), w, n, p, trials,
                                 seed, noiseless);
  }
  if (mech == "binary_tree") {
    require(is_thresholds_matrix(w.w) && is_power_of_two(w.w.cols()),
            ErrorCode::kDimensionMismatch,
            "binary_tree needs a power-of-two thresholds workload");
    return measure_error_central(binary_tree_factorization(w.w.cols()), w, n,
                                 p, trials, seed, noiseless);
  }
  if (mech == "data_independent") {
    Factorization base = tree_or_identity(w);
    NoiseCovariance cov = noise_covariance(base, p, n);
    DataIndependentReport rep = analyze_data_independent(cov, w, p, n);
    Factorization f;
    f.r = rep.r;
    f.a = rep.a;
    f.w_tilde = w.w;
    f.kind = FactorKind::kInf;
    f.value = factorization_value(f.r, f.a, f.kind);
    return measure_error_central(f, w, n, p, trials, seed, noiseless);
  }
  if (mech == "local_factorization") {
    Factorization f = normalize(tree_or_identity(w));
    auto mech_fn = [&](const Histogram& h, uint64_t s) {
      std::vector<int> dataset;
      dataset.reserve(static_cast<size_t>(h.total()));
      for (size_t x = 0; x < h.counts.size(); ++x) {
        long c = std::lround(h.counts[x]);
        for (long r = 0; r < c; ++r) dataset.push_back(static_cast<int>(x));
      }
      return local_protocol(f, dataset, p.epsilon, s, noiseless).output;
    };
    return measure_error(mech_fn, w, n, p, trials, seed);
  }
  throw Error(ErrorCode::kIoFailure, "unknown mechanism " + mech);
}

void write_report_csv(const std::string& path, const MechanismReport& rep,
                      const Workload& w, const std::string& mech,
                      const PrivacyParams& p, long n, uint64_t seed) {
  std::string text = "workload,k,N,mech,epsilon,delta,n,trial,err_linf,"
                     "err_l22,seed\n";
  const std::string head = csv_safe(w.name) + "," + std::to_string(w.w.rows()) +
                           "," + std::to_string(w.w.cols()) + "," + mech + "," +
                           format_double(p.epsilon) + "," +
                           format_double(p.delta) + "," + std::to_string(n);
  for (size_t t = 0; t < rep.linf_series.size(); ++t) {
    text += head + "," + std::to_string(t) + "," +
            format_double(rep.linf_series[t]) + "," +
            format_double(rep.l22_series[t]) + "," + std::to_string(seed) +
            "\n";
  }
  write_text_file(path, text);
}

// ---------------------------------------------------------------------------
// gamma2: factorization norms as JSON, optionally dumping factors as CSV.

struct Gamma2Args {
  std::string workload;
  std::string norm = "inf";
  double alpha = 0.0;
  double tol = 1e-7;
  std::string out;
  std::string factors;
};

int cmd_gamma2(const Gamma2Args& a) {
  Workload w = workload_from_descriptor(a.workload);
  SdpOptions opts = detail::default_norm_options();
  opts.tol = a.tol;
  json out;
  out["workload"] = a.workload;
  out["norm"] = a.norm;
  out["alpha"] = a.alpha;
  out["tol"] = a.tol;
  if (a.norm == "inf" || a.norm == "f") {
    Factorization f = (a.norm == "f") ? gamma2_frobenius(w.w, opts)
                      : (a.alpha > 0.0) ? gamma2_approx(w.w, a.alpha, opts)
                                        : gamma2(w.w, opts);
    out["value"] = f.value;
    out["residual"] = max_abs_residual(f);
    if (!a.factors.empty()) {
      write_matrix_csv(a.factors + "_r.csv", f.r);
      write_matrix_csv(a.factors + "_a.csv", f.a);
      write_matrix_csv(a.factors + "_wtilde.csv", f.w_tilde);
      out["factors"] = {{"r", a.factors + "_r.csv"},
                        {"a", a.factors + "_a.csv"},
                        {"wtilde", a.factors + "_wtilde.csv"}};
    }
  } else if (a.norm == "star") {
    GammaStarResult gs = gamma2_star(w.w, opts);
    out["value"] = gs.value;
    if (!a.factors.empty()) {
      write_vector_csv(a.factors + "_p.csv", gs.scaling_p);
      write_vector_csv(a.factors + "_q.csv", gs.scaling_q);
      write_matrix_csv(a.factors + "_utilde.csv", gs.u_tilde);
      out["factors"] = {{"p", a.factors + "_p.csv"},
                        {"q", a.factors + "_q.csv"},
                        {"utilde", a.factors + "_utilde.csv"}};
    }
  } else if (a.norm == "trace") {
    out["value"] = trace_norm_lb(w.w, a.alpha, opts);
  } else {
    throw Error(ErrorCode::kIoFailure, "unknown norm " + a.norm);
  }
  emit_json(out, a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// workload gen: matrix as CSV plus labels/pairing metadata as JSON.

int cmd_workload_gen(const std::string& desc, const std::string& prefix) {
  Workload w = workload_from_descriptor(desc);
  write_matrix_csv(prefix + ".csv", w.w);
  json meta;
  meta["descriptor"] = desc;
  meta["name"] = w.name;
  meta["rows"] = w.w.rows();
  meta["cols"] = w.w.cols();
  meta["query_labels"] = w.query_labels;
  meta["universe_labels"] = w.universe_labels;
  meta["pairing"] = w.pairing;
  meta["symmetric"] = w.symmetric;
  write_text_file(prefix + ".json", meta.dump(2) + "\n");
  json out;
  out["csv"] = prefix + ".csv";
  out["json"] = prefix + ".json";
  emit_json(out, "");
  return 0;
}

// ---------------------------------------------------------------------------
// mech run: one mechanism at one grid point, per-trial errors as CSV.

struct MechArgs {
  std::string workload;
  std::string mech = "central_gauss";
  double epsilon = 0.0;
  double delta = 0.0;
  long n = 0;
  int trials = 20;
  uint64_t seed = 0;
  bool noiseless = false;
  std::string out;
};

int cmd_mech_run(const MechArgs& a) {
  Workload w = workload_from_descriptor(a.workload);
  PrivacyParams p{a.epsilon, a.delta};
  MechanismReport rep =
      run_mechanism(w, a.mech, a.n, p, a.trials, a.seed, a.noiseless);
  write_report_csv(a.out, rep, w, a.mech, p, a.n, a.seed);
  json out;
  out["workload"] = a.workload;
  out["mech"] = a.mech;
  out["n"] = a.n;
  out["trials"] = a.trials;
  out["mean_linf"] = rep.mean_linf;
  out["se_linf"] = rep.se_linf;
  out["mean_l22"] = rep.mean_l22;
  out["se_l22"] = rep.se_l22;
  out["root_mean_l22"] = rep.root_mean_l22;
  out["csv"] = a.out;
  emit_json(out, "");
  return 0;
}

// ---------------------------------------------------------------------------
// lowerbound construct/verify: certificate bundle as JSON + CSV sidecars.
// Paths inside the JSON are relative to its directory so bundles relocate.

int cmd_lowerbound_construct(const std::string& desc, double alpha,
                             double epsilon, const std::string& prefix) {
  Workload w = workload_from_descriptor(desc);
  ScCertificate cert = sample_complexity_lb(w, alpha, epsilon);
  const std::string base =
      std::filesystem::path(prefix).filename().string();
  write_matrix_csv(prefix + "_u.csv", cert.family.witness.u);
  write_matrix_csv(prefix + "_m.csv", cert.family.m_tilde);
  write_matrix_csv(prefix + "_a.csv", cert.family.a_dists);
  write_matrix_csv(prefix + "_b.csv", cert.family.b_dists);
  write_vector_csv(prefix + "_pi.csv", cert.family.pi_hat);
  json j;
  j["workload"] = desc;
  j["alpha"] = cert.alpha;
  j["epsilon"] = cert.epsilon;
  j["alpha_prime"] = cert.alpha_prime;
  j["n_lower"] = cert.n_lower;
  j["m_norm"] = cert.m_norm;
  j["kl_threshold"] = cert.kl_threshold;
  j["case"] = cert.family.case_tag == CaseTag::kCase2 ? 2 : 1;
  j["case2_beta"] = cert.family.case2_beta;
  j["selected_bin"] = cert.family.selected_bin;
  j["witness_gamma2_star"] = cert.family.witness.gamma2_star;
  j["witness_objective"] = cert.family.witness.objective;
  j["files"] = {{"witness_u", base + "_u.csv"},
                {"m_tilde", base + "_m.csv"},
                {"a_dists", base + "_a.csv"},
                {"b_dists", base + "_b.csv"},
                {"pi_hat", base + "_pi.csv"}};
  write_text_file(prefix + ".json", j.dump(2) + "\n");
  json out;
  out["certificate"] = prefix + ".json";
  out["n_lower"] = cert.n_lower;
  out["alpha_prime"] = cert.alpha_prime;
  out["m_norm"] = cert.m_norm;
  emit_json(out, "");
  return 0;
}

int cmd_lowerbound_verify(const std::string& cert_path) {
  json j = load_json_file(cert_path);
  const std::filesystem::path dir =
      std::filesystem::path(cert_path).parent_path();
  auto side = [&](const char* key) {
    return (dir / j.at("files").at(key).get<std::string>()).string();
  };
  Workload w = workload_from_descriptor(j.at("workload").get<std::string>());
  ScCertificate cert;
  cert.alpha = j.at("alpha").get<double>();
  cert.epsilon = j.at("epsilon").get<double>();
  cert.alpha_prime = j.at("alpha_prime").get<double>();
  cert.n_lower = j.at("n_lower").get<double>();
  cert.m_norm = j.at("m_norm").get<double>();
  cert.kl_threshold = j.at("kl_threshold").get<double>();
  cert.family.alpha_prime = cert.alpha_prime;
  cert.family.case_tag =
      j.at("case").get<int>() == 2 ? CaseTag::kCase2 : CaseTag::kCase1;
  cert.family.case2_beta = j.at("case2_beta").get<double>();
  cert.family.selected_bin = j.at("selected_bin").get<std::vector<int>>();
  cert.family.witness.u = read_matrix_csv(side("witness_u"));
  cert.family.witness.alpha = cert.alpha;
  cert.family.witness.gamma2_star = j.at("witness_gamma2_star").get<double>();
  cert.family.witness.objective = j.at("witness_objective").get<double>();
  cert.family.m_tilde = read_matrix_csv(side("m_tilde"));
  cert.family.a_dists = read_matrix_csv(side("a_dists"));
  cert.family.b_dists = read_matrix_csv(side("b_dists"));
  cert.family.pi_hat = read_vector_csv(side("pi_hat"));

  std::vector<std::string> violations;
  // The stored gamma2*(U) feeds the factor-4 check, so it gets recomputed
  // from the stored witness rather than trusted.
  GammaStarResult gs = gamma2_star(cert.family.witness.u);
  if (std::fabs(gs.value - cert.family.witness.gamma2_star) >
      1e-6 * std::max(1.0, gs.value))
    violations.push_back("witness gamma2_star consistency");
  for (const std::string& v : verify_certificate(w, cert))
    violations.push_back(v);
  if (violations.empty()) {
    std::cout << "certificate verifies: n >= " << format_double(cert.n_lower)
              << " at alpha' = " << format_double(cert.alpha_prime) << "\n";
    return 0;
  }
  for (const std::string& v : violations)
    std::cout << "violated: " << v << "\n";
  return 1;
}

// ---------------------------------------------------------------------------
// sc-search: smallest n with mean linf error <= alpha, by doubling then
// bisection. Each n gets its own derived seed, so the predicate is a fixed
// function of n and the bracket is meaningful.

struct ScSearchArgs {
  std::string workload;
  std::string mech = "central_gauss";
  double alpha = 0.0;
  double epsilon = 0.0;
  double delta = 1e-5;
  int trials = 20;
  uint64_t seed = 0;
  bool noiseless = false;
  std::string out;
};

int cmd_sc_search(const ScSearchArgs& a) {
  constexpr long kCap = 1L << 20;
  Workload w = workload_from_descriptor(a.workload);
  PrivacyParams p{a.epsilon, a.delta};
  std::map<long, double> errs;
  json evals = json::array();
  auto eval = [&](long n) {
    MechanismReport rep = run_mechanism(w, a.mech, n, p, a.trials,
                                        substream(a.seed, static_cast<uint64_t>(n)),
                                        a.noiseless);
    errs[n] = rep.mean_linf;
    evals.push_back({n, rep.mean_linf});
    return rep.mean_linf;
  };
  long lo = 0;  // largest n known to fail (0 = none yet)
  long hi = 1;
  double err = eval(hi);
  while (err > a.alpha) {
    if (hi >= kCap)
      throw Error(ErrorCode::kSearchExhausted,
                  "no n <= " + std::to_string(kCap) + " reaches alpha = " +
                      format_double(a.alpha));
    lo = hi;
    hi *= 2;
    err = eval(hi);
  }
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    if (eval(mid) <= a.alpha)
      hi = mid;
    else
      lo = mid;
  }
  json out;
  out["workload"] = a.workload;
  out["mech"] = a.mech;
  out["alpha"] = a.alpha;
  out["epsilon"] = a.epsilon;
  out["delta"] = a.delta;
  out["trials"] = a.trials;
  out["seed"] = a.seed;
  out["n_star"] = hi;
  out["err_at_n_star"] = errs.at(hi);
  if (lo >= 1)
    out["err_below"] = errs.at(lo);
  else
    out["err_below"] = nullptr;
  out["evaluations"] = evals;
  emit_json(out, a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// experiment sweep: epsilon x n grid from a JSON config, points evaluated
// concurrently on derived seeds, files written by the gathering thread in a
// fixed order so reruns are byte-identical.

int cmd_sweep(const std::string& config_path) {
  json cfg = load_json_file(config_path);
  for (const char* key :
       {"workload", "mech", "epsilon_grid", "n_grid", "trials", "seed",
        "out_dir"})
    require(cfg.contains(key), ErrorCode::kIoFailure,
            std::string("sweep config needs \"") + key + "\"");
  const std::string desc = cfg["workload"].get<std::string>();
  const std::string mech = cfg["mech"].get<std::string>();
  const std::vector<double> eps_grid =
      cfg["epsilon_grid"].get<std::vector<double>>();
  const std::vector<long> n_grid = cfg["n_grid"].get<std::vector<long>>();
  require(!eps_grid.empty() && !n_grid.empty(), ErrorCode::kIoFailure,
          "sweep grids must be non-empty");
  const double delta = cfg.value("delta", 0.0);
  const int trials = cfg["trials"].get<int>();
  const uint64_t seed = cfg["seed"].get<uint64_t>();
  const bool noiseless = cfg.value("noiseless", false);
  const std::string out_dir = cfg["out_dir"].get<std::string>();
  std::filesystem::create_directories(out_dir);

  Workload w = workload_from_descriptor(desc);
  std::vector<std::future<MechanismReport>> futures;
  for (size_t i = 0; i < eps_grid.size(); ++i)
    for (size_t j = 0; j < n_grid.size(); ++j) {
      const size_t idx = i * n_grid.size() + j;
      PrivacyParams p{eps_grid[i], delta};
      long n = n_grid[j];
      futures.push_back(std::async(std::launch::async, [=, &w]() {
        return run_mechanism(w, mech, n, p, trials, substream(seed, idx),
                             noiseless);
      }));
    }

  std::string summary =
      "workload,k,N,mech,epsilon,delta,n,trials,seed,mean_linf,se_linf,"
      "mean_l22,se_l22,root_mean_l22\n";
  for (size_t i = 0; i < eps_grid.size(); ++i)
    for (size_t j = 0; j < n_grid.size(); ++j) {
      const size_t idx = i * n_grid.size() + j;
      MechanismReport rep = futures[idx].get();
      PrivacyParams p{eps_grid[i], delta};
      const std::string point =
          (std::filesystem::path(out_dir) /
           ("point_" + std::to_string(idx) + ".csv"))
              .string();
      write_report_csv(point, rep, w, mech, p, n_grid[j],
                       substream(seed, idx));
      summary += csv_safe(w.name) + "," + std::to_string(w.w.rows()) + "," +
                 std::to_string(w.w.cols()) + "," + mech + "," +
                 format_double(eps_grid[i]) + "," + format_double(delta) +
                 "," + std::to_string(n_grid[j]) + "," +
                 std::to_string(trials) + "," +
                 std::to_string(substream(seed, idx)) + "," +
                 format_double(rep.mean_linf) + "," +
                 format_double(rep.se_linf) + "," +
                 format_double(rep.mean_l22) + "," +
                 format_double(rep.se_l22) + "," +
                 format_double(rep.root_mean_l22) + "\n";
    }
  const std::string summary_path =
      (std::filesystem::path(out_dir) / "sweep.csv").string();
  write_text_file(summary_path, summary);
  json out;
  out["points"] = eps_grid.size() * n_grid.size();
  out["out_dir"] = out_dir;
  out["summary"] = summary_path;
  emit_json(out, "");
  return 0;
}

// ---------------------------------------------------------------------------
// Config file support: --config <file.json> supplies defaults for the leaf
// subcommand's options; flags given explicitly on the command line win.

bool arg_present(const std::vector<std::string>& args,
                 const std::string& flag) {
  for (const std::string& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

CLI::App* find_leaf(CLI::App* app, const std::vector<std::string>& args) {
  CLI::App* cur = app;
  for (const std::string& tok : args) {
    if (!tok.empty() && tok[0] == '-') continue;
    bool matched = false;
    for (CLI::App* sub : cur->get_subcommands([](CLI::App*) { return true; }))
      if (sub->get_name() == tok) {
        cur = sub;
        matched = true;
        break;
      }
    if (!matched && cur != app) break;
  }
  return cur;
}

void expand_config(CLI::App* app, std::vector<std::string>& args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  json cfg = load_json_file(path);
  require(cfg.is_object(), ErrorCode::kIoFailure, "config must be an object");
  CLI::App* leaf = find_leaf(app, args);
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string flag = "--" + it.key();
    if (arg_present(args, flag)) continue;
    const CLI::Option* opt = leaf->get_option_no_throw(flag);
    if (opt == nullptr) continue;
    const json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
      continue;
    }
    if (v.is_array() || v.is_object()) continue;  // read directly by sweep
    args.push_back(flag);
    args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"factorization norms, DP mechanisms, and lower bound "
               "certificates for linear query workloads"};
  app.require_subcommand(1);

  // Every leaf accepts --config; expand_config already consumed it, the
  // binding here just keeps the flag documented and accepted by the parser.
  std::string config_path;

  // gamma2
  Gamma2Args ga;
  CLI::App* gamma = app.add_subcommand("gamma2", "factorization norms");
  gamma->add_option("--workload", ga.workload, "workload descriptor")
      ->required();
  gamma->add_option("--norm", ga.norm, "inf | f | star | trace");
  gamma->add_option("--alpha", ga.alpha, "approximation tolerance");
  gamma->add_option("--tol", ga.tol, "SDP tolerance");
  gamma->add_option("--out", ga.out, "JSON output path");
  gamma->add_option("--factors", ga.factors, "CSV prefix for factors");
  gamma->add_option("--config", config_path, "JSON config with option defaults");

  // workload gen
  CLI::App* workload = app.add_subcommand("workload", "workload utilities");
  workload->require_subcommand(1);
  std::string gen_desc, gen_prefix;
  CLI::App* gen = workload->add_subcommand("gen", "write matrix + metadata");
  gen->add_option("--workload", gen_desc, "workload descriptor")->required();
  gen->add_option("--out", gen_prefix, "output path prefix")->required();
  gen->add_option("--config", config_path, "JSON config with option defaults");

  // mech run
  MechArgs ma;
  CLI::App* mech = app.add_subcommand("mech", "mechanism runs");
  mech->require_subcommand(1);
  CLI::App* mrun = mech->add_subcommand("run", "run one mechanism");
  mrun->add_option("--workload", ma.workload, "workload descriptor")
      ->required();
  mrun->add_option("--mech", ma.mech,
                   "central_gauss | binary_tree | local_factorization | "
                   "data_independent");
  mrun->add_option("--epsilon", ma.epsilon, "privacy epsilon")->required();
  mrun->add_option("--delta", ma.delta, "privacy delta");
  mrun->add_option("--n", ma.n, "dataset size")->required();
  mrun->add_option("--trials", ma.trials, "trials per histogram");
  mrun->add_option("--seed", ma.seed, "root seed")->required();
  mrun->add_flag("--noiseless", ma.noiseless, "disable noise (debug)");
  mrun->add_option("--out", ma.out, "CSV output path")->required();
  mrun->add_option("--config", config_path, "JSON config with option defaults");

  // lowerbound construct / verify
  CLI::App* lb = app.add_subcommand("lowerbound", "certificates");
  lb->require_subcommand(1);
  std::string lbc_desc, lbc_prefix, lbv_cert;
  double lbc_alpha = 0.0, lbc_eps = 0.0;
  CLI::App* lbc = lb->add_subcommand("construct", "build a certificate");
  lbc->add_option("--workload", lbc_desc, "workload descriptor")->required();
  lbc->add_option("--alpha", lbc_alpha, "target accuracy")->required();
  lbc->add_option("--epsilon", lbc_eps, "local privacy epsilon")->required();
  lbc->add_option("--out", lbc_prefix, "output path prefix")->required();
  lbc->add_option("--config", config_path, "JSON config with option defaults");
  CLI::App* lbv = lb->add_subcommand("verify", "recheck a certificate");
  lbv->add_option("--cert", lbv_cert, "certificate JSON path")->required();
  lbv->add_option("--config", config_path, "JSON config with option defaults");

  // sc-search
  ScSearchArgs sa;
  CLI::App* sc = app.add_subcommand("sc-search", "smallest n within alpha");
  sc->add_option("--workload", sa.workload, "workload descriptor")->required();
  sc->add_option("--mech", sa.mech, "mechanism name");
  sc->add_option("--alpha", sa.alpha, "target mean linf error")->required();
  sc->add_option("--epsilon", sa.epsilon, "privacy epsilon")->required();
  sc->add_option("--delta", sa.delta, "privacy delta");
  sc->add_option("--trials", sa.trials, "trials per histogram");
  sc->add_option("--seed", sa.seed, "root seed")->required();
  sc->add_flag("--noiseless", sa.noiseless, "disable noise (debug)");
  sc->add_option("--out", sa.out, "JSON output path");
  sc->add_option("--config", config_path, "JSON config with option defaults");

  // experiment sweep
  CLI::App* exp = app.add_subcommand("experiment", "experiment drivers");
  exp->require_subcommand(1);
  std::string sweep_cfg;
  CLI::App* sweep = exp->add_subcommand("sweep", "epsilon x n grid");
  sweep->add_option("--config", sweep_cfg, "sweep config JSON")->required();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    expand_config(&app, args);
    // CLI11 parses the vector in reverse order.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gamma->parsed()) return cmd_gamma2(ga);
    if (gen->parsed()) return cmd_workload_gen(gen_desc, gen_prefix);
    if (mrun->parsed()) return cmd_mech_run(ma);
    if (lbc->parsed())
      return cmd_lowerbound_construct(lbc_desc, lbc_alpha, lbc_eps,
                                      lbc_prefix);
    if (lbv->parsed()) return cmd_lowerbound_verify(lbv_cert);
    if (sc->parsed()) return cmd_sc_search(sa);
    if (sweep->parsed()) return cmd_sweep(sweep_cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kSearchExhausted ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
