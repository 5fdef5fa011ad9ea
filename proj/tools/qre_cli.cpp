// qre: factorize integrals, cost the four qubitized methods and qDRIFT, lay out on the surface code.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "qre/cost_models.hpp"
#include "qre/factorizations.hpp"
#include "qre/oracle.hpp"
#include "qre/qdrift.hpp"
#include "qre/serialize.hpp"
#include "qre/surface.hpp"
#include "qre/tensors.hpp"
#include "qre/thc_optimizer.hpp"

namespace fs = std::filesystem;
using namespace qre;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

/// Flat key = value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ConversionError("config line " + std::to_string(lineno) + ": expected key = value");
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

/// Config entries become leading arguments so explicit flags, parsed later, win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> cfg;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      cfg = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      cfg = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!cfg || rest.empty()) return rest;
  std::vector<std::string> out{rest.front()};
  for (const auto& [k, v] : read_config(*cfg)) {
    if (v == "true") {
      out.push_back("--" + k);
    } else if (v != "false") {
      out.push_back("--" + k);
      out.push_back(v);
    }
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

struct Output {
  std::string path;
  std::string format = "json";

  void emit(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw Error("cannot write " + path);
      f << text;
    }
  }
};

json envelope(const std::string& command, const json& config, const std::string& inputs, const json& result) {
  json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = config;
  j["input_hash"] = "sha256:" + sha256_hex(config.dump() + "\n" + inputs);
  j["result"] = result;
  return j;
}

std::string sci(double x) { return fmt::format("{:.3e}", x); }

// ---------------------------------------------------------------- factorize

struct FactorizeArgs {
  std::string input;
  std::string method;
  std::optional<double> threshold;
  std::optional<int> rank;
  double sf_tol = 1e-10;
  int starts = 20;
  std::uint64_t seed = 0;
  int max_iters = 3000;
  std::optional<int> beth, aleph;
};

int cmd_factorize(const FactorizeArgs& a, const Output& out) {
  const std::string raw = read_file(a.input);
  IntegralData data = parse_fcidump(raw);
  validate(data, 1e-10);
  symmetrize(data);
  const KineticCorrected kc = compute_T(data);

  json config = {{"input", fs::path(a.input).filename().string()}, {"method", a.method}, {"sf_tol", a.sf_tol}};
  json result;
  FactorizedRep rep;
  if (a.method == "sparse") {
    if (!a.threshold) throw Error("sparse needs --threshold");
    config["threshold"] = *a.threshold;
    auto [sp, lam] = sparse_truncate(data, kc.Tprime, *a.threshold);
    rep = sp;
    result = rep_json(rep, lam);
  } else if (a.method == "sf") {
    if (a.rank) config["rank"] = *a.rank;
    rep = single_factorize(data, a.rank, a.sf_tol);
    result = rep_json(rep, lambda_sf(std::get<SFRep>(rep), kc.Tprime));
  } else if (a.method == "df") {
    if (!a.threshold) throw Error("df needs --threshold");
    config["threshold"] = *a.threshold;
    if (a.rank) config["rank"] = *a.rank;
    const SFRep sf = single_factorize(data, a.rank, a.sf_tol);
    rep = double_factorize(sf, *a.threshold);
    result = rep_json(rep, lambda_df(std::get<DFRep>(rep), kc.Tprime));
  } else if (a.method == "thc") {
    if (!a.rank) throw Error("thc needs --rank (the THC rank M)");
    FitConfig fc;
    fc.M = *a.rank;
    fc.n_starts = a.starts;
    fc.seed = a.seed;
    fc.max_iters_lbfgs = a.max_iters;
    config["rank"] = fc.M;
    config["starts"] = fc.n_starts;
    config["seed"] = fc.seed;
    config["max_iters"] = fc.max_iters_lbfgs;
    const FitResult fit = thc_fit(data.V, fc);
    rep = fit.rep;
    result = rep_json(rep, lambda_thc(fit.rep, kc.Tprime));
    result["fit"] = {{"objective", fit.objective}, {"seed", fit.seed}, {"aborted_restarts", fit.aborted}};
    if (a.beth || a.aleph) {
      if (!a.beth || !a.aleph) throw Error("quantization needs both --beth and --aleph");
      config["beth"] = *a.beth;
      config["aleph"] = *a.aleph;
      const QuantizedTHC q = quantize(fit.rep, *a.beth, *a.aleph);
      result["quantized"] = quantized_json(q);
      if (q.normalization_fallback) std::cerr << "warning: zeta normalization not reached, using x = 0\n";
    }
  } else {
    throw Error("unknown method " + a.method);
  }
  const ReconstructionErrors err = reconstruction_errors(data.V, rep_tensor(rep));
  result["reconstruction"] = {{"eps_co", err.eps_co}, {"eps_in", err.eps_in}};
  result["e_core"] = data.e_core;
  result["t_convention"] = kTConvention;
  out.emit(envelope("factorize", config, raw, result).dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- cost

struct CostArgs {
  std::string method;
  CostParams p;
  std::optional<int> aleph, aleph1, aleph2, beth;
  std::vector<std::string> k;
  std::string mode = "confidence";
  std::string from_reps;
  double eps_qdrift = 0.0016;
  std::optional<double> qdrift_lambda;
};

json params_json(const CostParams& p) {
  json j = {{"N", p.N}, {"lambda", p.lambda}, {"eps_pea", p.eps_pea}, {"b_r", p.b_r}};
  if (p.aleph) j["aleph"] = *p.aleph;
  if (p.aleph1) j["aleph1"] = *p.aleph1;
  if (p.aleph2) j["aleph2"] = *p.aleph2;
  if (p.beth) j["beth"] = *p.beth;
  if (p.beth_eq_form) j["beth_eq_form"] = true;
  if (p.M) j["M"] = p.M;
  if (p.d) j["d"] = p.d;
  if (p.L) j["L"] = p.L;
  if (p.Xi_total) j["Xi_total"] = p.Xi_total;
  if (p.Xi_max) j["Xi_max"] = p.Xi_max;
  if (!p.k_overrides.empty()) j["k"] = p.k_overrides;
  return j;
}

CostReport run_method(const std::string& m, const CostParams& p) {
  if (m == "thc") return cost_thc(p);
  if (m == "sparse") return cost_sparse(p);
  if (m == "sf") return cost_sf(p);
  if (m == "df") return cost_df(p);
  throw Error("unknown cost method " + m);
}

std::string cost_table(const std::vector<std::pair<json, CostReport>>& rows) {
  std::string t = fmt::format("{:<22} {:>10} {:>12} {:>10} {:>14}\n", "method", "lambda", "toffoli", "qubits", "toffoli/step");
  for (const auto& [in, r] : rows) {
    const double lam = in.value("lambda", 0.0);
    t += fmt::format("{:<22} {:>10} {:>12} {:>10} {:>14}\n", r.method, sci(lam), sci(r.toffoli_total_real),
                     r.logical_qubits, r.toffoli_per_step);
  }
  return t;
}

std::string cost_csv(const std::vector<std::pair<json, CostReport>>& rows) {
  std::string t = "method,lambda,toffoli,logical_qubits,toffoli_per_step\n";
  for (const auto& [in, r] : rows)
    t += fmt::format("{},{},{},{},{}\n", r.method, in.value("lambda", 0.0), r.toffoli_total_real, r.logical_qubits,
                     r.toffoli_per_step);
  return t;
}

int cmd_cost(CostArgs a, const Output& out) {
  a.p.aleph = a.aleph;
  a.p.aleph1 = a.aleph1;
  a.p.aleph2 = a.aleph2;
  a.p.beth = a.beth;
  for (const auto& kv : a.k) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--k expects role=value, got " + kv);
    a.p.k_overrides[kv.substr(0, eq)] = std::stoll(kv.substr(eq + 1));
  }

  std::vector<std::pair<json, CostReport>> rows;
  std::string inputs;
  json config;
  if (a.method == "all") {
    if (a.from_reps.empty()) throw Error("--method all needs --from-reps DIR");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.from_reps))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no representation files in " + a.from_reps);
    static const std::map<std::string, int> order{{"sparse", 0}, {"sf", 1}, {"df", 2}, {"thc", 3}};
    std::vector<std::pair<int, std::pair<json, CostReport>>> found;
    for (const auto& f : files) {
      const std::string raw = read_file(f.string());
      inputs += f.filename().string() + "\n" + raw;
      json j = json::parse(raw);
      const json& res = j.contains("result") ? j["result"] : j;
      CostParams p = a.p;
      const json& ci = res.at("cost_inputs");
      p.N = ci.at("N").get<count_t>();
      p.lambda = ci.at("lambda").get<double>();
      p.M = ci.value("M", count_t{0});
      p.d = ci.value("d", count_t{0});
      p.L = ci.value("L", count_t{0});
      p.Xi_total = ci.value("Xi_total", count_t{0});
      p.Xi_max = ci.value("Xi_max", count_t{0});
      const std::string m = res.at("method").get<std::string>();
      found.push_back({order.count(m) ? order.at(m) : 9, {params_json(p), run_method(m, p)}});
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& f : found) rows.push_back(std::move(f.second));
    if (a.qdrift_lambda) {
      const QdriftMode mode = parse_qdrift_mode(a.mode);
      const count_t N = rows.front().first.at("N").get<count_t>();
      rows.push_back({json{{"N", N}, {"lambda", *a.qdrift_lambda}, {"eps", a.eps_qdrift}},
                      cost_qdrift(*a.qdrift_lambda, a.eps_qdrift, N, mode)});
    }
    config = {{"method", "all"}, {"from_reps", fs::path(a.from_reps).filename().string()}, {"params", params_json(a.p)}};
  } else if (a.method == "qdrift") {
    const QdriftMode mode = parse_qdrift_mode(a.mode);
    if (!(a.p.lambda > 0) || a.p.N < 1) throw Error("qdrift needs --lambda and --N");
    config = {{"method", "qdrift"}, {"mode", to_string(mode)}, {"lambda", a.p.lambda}, {"eps", a.eps_qdrift}, {"N", a.p.N}};
    rows.push_back({config, cost_qdrift(a.p.lambda, a.eps_qdrift, a.p.N, mode)});
  } else {
    config = params_json(a.p);
    config["method"] = a.method;
    rows.push_back({config, run_method(a.method, a.p)});
  }

  if (out.format == "table") {
    out.emit(cost_table(rows));
  } else if (out.format == "csv") {
    out.emit(cost_csv(rows));
  } else {
    json result;
    if (rows.size() == 1) {
      result = cost_json(rows.front().second);
      result["inputs"] = rows.front().first;
    } else {
      result = json::array();
      for (const auto& [in, r] : rows) {
        json c = cost_json(r);
        c["inputs"] = in;
        result.push_back(c);
      }
    }
    out.emit(envelope("cost", config, inputs, result).dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- layout

struct LayoutArgs {
  std::optional<double> toffoli;
  std::optional<double> tiles, logical;
  std::string from_cost;
  PhysicalAssumptions a;
  std::vector<double> sweep_p;
  std::vector<int> sweep_factories;
};

int cmd_layout(LayoutArgs a, const Output& out) {
  LayoutInput in;
  std::string inputs;
  if (!a.from_cost.empty()) {
    inputs = read_file(a.from_cost);
    json j = json::parse(inputs);
    const json& r = j.contains("result") ? j["result"] : j;
    in.toffoli = r.at("toffoli_total").get<double>();
    in.logical_qubits = r.at("logical_qubits").get<double>();
  }
  if (a.toffoli) in.toffoli = *a.toffoli;
  if (a.tiles) in.tiles = *a.tiles;
  if (a.logical) in.logical_qubits = *a.logical;
  if (!a.toffoli && a.from_cost.empty()) throw Error("layout needs --toffoli or --from-cost");

  json config = {{"toffoli", in.toffoli}, {"assumptions", assumptions_json(a.a)}};
  if (in.tiles) config["tiles"] = *in.tiles;
  if (in.logical_qubits) config["logical_qubits"] = *in.logical_qubits;

  if (!a.sweep_p.empty() || !a.sweep_factories.empty()) {
    if (a.sweep_p.empty()) a.sweep_p = {a.a.phys_error_rate};
    if (a.sweep_factories.empty()) a.sweep_factories = {a.a.factory_count};
    std::string csv = "phys_error_rate,factories,code_distance,physical_qubits,runtime_seconds,limiting\n";
    for (double p : a.sweep_p)
      for (int f : a.sweep_factories) {
        PhysicalAssumptions s = a.a;
        s.phys_error_rate = p;
        s.factory_count = f;
        try {
          const PhysicalEstimate e = layout_estimate(in, s);
          csv += fmt::format("{},{},{},{},{},{}\n", p, f, e.d, e.physical_qubits, e.runtime_seconds, e.limiting);
        } catch (const Error&) {
          csv += fmt::format("{},{},infeasible,,,\n", p, f);
        }
      }
    out.emit(csv);
    return kExitOk;
  }

  const PhysicalEstimate e = layout_estimate(in, a.a);
  if (out.format == "table") {
    out.emit(fmt::format("code distance      {}\nfactory distances  {} / {}\ntiles              {}\nphysical qubits    {}\n"
                         "runtime            {} s ({} days)\nlimiting           {}\n",
                         e.d, e.factory_level1, e.factory_level2, e.tiles, sci(e.physical_qubits), sci(e.runtime_seconds),
                         sci(e.runtime_seconds / 86400.0), e.limiting));
  } else if (out.format == "csv") {
    out.emit(fmt::format("code_distance,physical_qubits,runtime_seconds,limiting\n{},{},{},{}\n", e.d, e.physical_qubits,
                         e.runtime_seconds, e.limiting));
  } else {
    out.emit(envelope("layout", config, inputs, estimate_json(e)).dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::vector<std::string> suites;
  bool all = false;
  std::uint64_t seed = 0;
  int instances = 4;
  bool inject = false;
};

json suite_spectrum(const VerifyArgs& a, bool& ok) {
  json checks = json::array();
  for (int i = 0; i < a.instances; ++i) {
    const int n = 2 + i % 2;
    const IntegralData d = random_integrals(n, a.seed + i);
    const Eigen::MatrixXd Tp = compute_T(d).Tprime;
    std::vector<FactorizedRep> reps;
    reps.push_back(sparse_truncate(d, Tp, 0.05).first);
    const SFRep sf = single_factorize(d, std::nullopt);
    reps.push_back(sf);
    reps.push_back(double_factorize(sf, 0.01));
    THCRep thc;
    thc.chi = Eigen::MatrixXd::Identity(n, n);
    thc.zeta = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) thc.zeta(p, r) = d.V(p, p, r, r);
    reps.push_back(thc);
    for (const auto& rep : reps) {
      BoundCheck c = lambda_bounds_spectrum(rep, d);
      if (a.inject) {
        c.lambda = 0.0;
        c.ok = c.max_deviation <= 1e-9;
      }
      ok = ok && c.ok;
      checks.push_back({{"seed", a.seed + i}, {"n", n}, {"method", c.method}, {"lambda", c.lambda},
                        {"max_deviation", c.max_deviation}, {"pass", c.ok}});
    }
  }
  return checks;
}

json suite_contiguous(const VerifyArgs& a, bool& ok) {
  json checks = json::array();
  for (int n = 1; n <= 10; ++n) {
    const ContiguousSchedule s = simulate_contiguous_schedule(n);
    std::int64_t expect = contiguous_register_cost(n);
    if (a.inject) ++expect;
    const bool pass = s.correct && s.toffoli_count == expect;
    ok = ok && pass;
    checks.push_back({{"n", n}, {"toffoli", s.toffoli_count}, {"expected", expect}, {"bit_exact", s.correct}, {"pass", pass}});
  }
  return checks;
}

json suite_reconstruction(const VerifyArgs& a, bool& ok) {
  json checks = json::array();
  for (int i = 0; i < a.instances; ++i) {
    const int n = 2 + i % 3;
    IntegralData d = random_integrals(n, a.seed + 100 + i);
    const SFRep sf = single_factorize(d, std::nullopt);
    const DFRep df = double_factorize(sf, 0.0);
    const SparseRep sp = sparse_truncate(d, compute_T(d).Tprime, 0.0).first;
    // A perturbed reference makes every exact representation look wrong.
    if (a.inject) d.V.set_symmetric(0, 0, 0, 0, d.V(0, 0, 0, 0) + 1e-3);
    const double sf_err = reconstruction_errors(d.V, sf.tensor()).eps_co;
    const double df_err = reconstruction_errors(d.V, df.tensor()).eps_co;
    const double sp_err = reconstruction_errors(d.V, sp.tensor()).eps_co;
    const bool pass = sf_err < 1e-8 && df_err < 1e-8 && sp_err < 1e-12;
    ok = ok && pass;
    checks.push_back({{"seed", a.seed + 100 + i}, {"n", n}, {"sf_eps_co", sf_err}, {"df_eps_co", df_err},
                      {"sparse_eps_co", sp_err}, {"pass", pass}});
  }
  return checks;
}

int cmd_verify(VerifyArgs a, const Output& out) {
  if (a.all) a.suites = {"spectrum", "contiguous", "reconstruction"};
  if (a.suites.empty()) throw Error("verify needs --suite or --all");
  bool ok = true;
  json result = json::object();
  for (const auto& s : a.suites) {
    bool suite_ok = true;
    json checks;
    if (s == "spectrum")
      checks = suite_spectrum(a, suite_ok);
    else if (s == "contiguous")
      checks = suite_contiguous(a, suite_ok);
    else if (s == "reconstruction")
      checks = suite_reconstruction(a, suite_ok);
    else
      throw Error("unknown suite " + s);
    result[s] = {{"pass", suite_ok}, {"checks", checks}};
    ok = ok && suite_ok;
  }
  result["pass"] = ok;
  json config = {{"suites", a.suites}, {"seed", a.seed}, {"instances", a.instances}, {"inject_failure", a.inject}};
  if (out.format == "table") {
    std::string t;
    for (const auto& s : a.suites) t += fmt::format("{:<16} {}\n", s, result[s]["pass"].get<bool>() ? "PASS" : "FAIL");
    out.emit(t);
  } else {
    out.emit(envelope("verify", config, "", result).dump(2) + "\n");
  }
  return ok ? kExitOk : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resource estimates for qubitized chemistry simulation"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Output out;
  auto add_output = [&](CLI::App* s) {
    s->add_option("--out,-o", out.path, "Write the report here instead of stdout");
    s->add_option("--format", out.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
  };

  FactorizeArgs fa;
  auto* fac = app.add_subcommand("factorize", "Build a representation from an FCIDUMP file");
  fac->add_option("input", fa.input, "FCIDUMP file")->required()->check(CLI::ExistingFile);
  fac->add_option("--method", fa.method)->required()->check(CLI::IsMember({"sparse", "sf", "df", "thc"}));
  fac->add_option("--threshold", fa.threshold, "Truncation threshold (sparse, df)");
  fac->add_option("--rank", fa.rank, "L for sf/df, M for thc");
  fac->add_option("--sf-tol", fa.sf_tol, "Cholesky stopping tolerance");
  fac->add_option("--starts", fa.starts, "THC restarts");
  fac->add_option("--seed", fa.seed, "Base seed for THC restarts");
  fac->add_option("--max-iters", fa.max_iters, "Quasi-Newton iterations per restart");
  fac->add_option("--beth", fa.beth, "Quantize THC angles to this many bits");
  fac->add_option("--aleph", fa.aleph, "Quantize zeta to this many bits");
  add_output(fac);

  CostArgs ca;
  auto* cost = app.add_subcommand("cost", "Toffoli and logical qubit counts");
  cost->add_option("--method", ca.method)->required()->check(CLI::IsMember({"thc", "sparse", "sf", "df", "qdrift", "all"}));
  cost->add_option("--N", ca.p.N, "Spin orbitals");
  cost->add_option("--lambda", ca.p.lambda);
  cost->add_option("--eps-pea", ca.p.eps_pea, "Phase estimation error (Hartree)");
  cost->add_option("--eps", ca.eps_qdrift, "Target error for qdrift (Hartree)");
  cost->add_option("--M", ca.p.M, "THC rank");
  cost->add_option("--d", ca.p.d, "Sparse data items");
  cost->add_option("--L", ca.p.L, "Outer rank");
  cost->add_option("--Xi-total", ca.p.Xi_total);
  cost->add_option("--Xi-max", ca.p.Xi_max);
  cost->add_option("--aleph", ca.aleph);
  cost->add_option("--aleph1", ca.aleph1);
  cost->add_option("--aleph2", ca.aleph2);
  cost->add_option("--beth", ca.beth);
  cost->add_option("--br", ca.p.b_r);
  cost->add_flag("--beth-eq", ca.p.beth_eq_form, "Use the N lambda / eps form for the default beth");
  cost->add_option("--k", ca.k, "Fix a QROM parameter, role=value (k1=0 scans the sparse k1)")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cost->add_option("--mode", ca.mode)->check(CLI::IsMember({"rms", "confidence", "hodges_lehmann", "hl"}));
  cost->add_option("--from-reps", ca.from_reps, "Directory of factorize outputs");
  cost->add_option("--qdrift-lambda", ca.qdrift_lambda, "Add a qdrift row to --method all");
  add_output(cost);

  LayoutArgs la;
  auto* lay = app.add_subcommand("layout", "Surface code distance, qubits and runtime");
  lay->add_option("--toffoli", la.toffoli);
  lay->add_option("--tiles", la.tiles, "Total tiles including factories");
  lay->add_option("--logical-qubits", la.logical);
  lay->add_option("--from-cost", la.from_cost, "Cost report to lay out")->check(CLI::ExistingFile);
  lay->add_option("--p", la.a.phys_error_rate, "Physical error rate");
  lay->add_option("--factories", la.a.factory_count);
  lay->add_option("--cycle", la.a.cycle_time, "Code cycle (s)");
  lay->add_option("--reaction", la.a.reaction_time, "Reaction time (s)");
  lay->add_option("--budget", la.a.total_error_budget);
  lay->add_option("--factory-rate", la.a.factory_rate_per_factory, "CCZ/s per factory at the reference distance");
  lay->add_option("--sweep-p", la.sweep_p)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  lay->add_option("--sweep-factories", la.sweep_factories)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  add_output(lay);

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run brute-force oracle suites");
  ver->add_option("--suite", va.suites)->check(CLI::IsMember({"spectrum", "contiguous", "reconstruction"}))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  ver->add_flag("--all", va.all);
  ver->add_option("--seed", va.seed);
  ver->add_option("--instances", va.instances);
  ver->add_flag("--inject-failure", va.inject, "Corrupt one check to exercise the failure path");
  add_output(ver);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*fac) return cmd_factorize(fa, out);
    if (*cost) return cmd_cost(ca, out);
    if (*lay) return cmd_layout(la, out);
    if (*ver) return cmd_verify(va, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
