// Acceptance checks. One PASS/FAIL line per criterion, details indented below it.
// Usage: acceptance [--expect-fail k]...  Exit 0 when the failing set equals the expected set.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "property_suite.hpp"
#include "qre/cost_models.hpp"
#include "qre/oracle.hpp"
#include "qre/qdrift.hpp"
#include "qre/serialize.hpp"
#include "qre/surface.hpp"

using namespace qre;

namespace {

// Tolerances
constexpr double kCostRel = 0.02;
constexpr int kQubitAbs = 2;
constexpr double kCosineAbs = 1e-4;
constexpr double kKaiserAbs = 1e-3;
constexpr double kCiRatioAbs = 0.5;
constexpr double kCiAlphaAbs = 0.01;
constexpr double kNexpRel = 1e-3;
constexpr double kQdriftRel = 0.05;
constexpr double kQdriftSeconds = 10.0;
constexpr double kContiguousSeconds = 5.0;
constexpr double kSurfaceQubitRel = 0.10;
constexpr double kSurfaceRuntimeRel = 0.15;
constexpr double kSurfaceRatioRel = 0.01;
constexpr double kPropertySeconds = 300.0;
constexpr int kPropertyInstances = 20;
constexpr double kDataLambdaAbs = 0.1;

enum class Status { pass, fail, skip };

struct Criterion {
  Status status = Status::pass;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
    if (!ok) status = Status::fail;
  }
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

bool rel_close(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_cost(Criterion& c, const std::string& label, const CostReport& r, double toffoli, count_t qubits) {
  c.check(rel_close(r.toffoli_total_real, toffoli, kCostRel) && std::abs(r.logical_qubits - qubits) <= kQubitAbs,
          fmt("%-12s Toffoli %.4e (target %.1e +-2%%), qubits %lld (target %lld +-2)", label.c_str(),
              r.toffoli_total_real, toffoli, (long long)r.logical_qubits, (long long)qubits));
}

CostParams params(count_t N, double lambda) {
  CostParams p;
  p.N = N;
  p.lambda = lambda;
  p.eps_pea = 1e-3;
  p.b_r = 7;
  return p;
}

Criterion criterion1() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [label, N, M, lam, beth, tof, q] :
       std::vector<std::tuple<std::string, count_t, count_t, double, int, double, count_t>>{
           {"THC Reiher", 108, 350, 306.3, 16, 5.3e9, 2142}, {"THC Li", 152, 450, 1201.5, 20, 3.2e10, 2196}}) {
    CostParams p = params(N, lam);
    p.M = M;
    p.aleph = 10;
    p.beth = beth;
    check_cost(c, label, cost_thc(p), tof, q);
  }
  for (const auto& [label, N, d, lam, tof, q] : std::vector<std::tuple<std::string, count_t, count_t, double, double, count_t>>{
           {"sparse Reiher", 108, 705831, 2135.3, 8.8e10, 2190}, {"sparse Li", 152, 440501, 1547.3, 4.4e10, 2489}}) {
    CostParams p = params(N, lam);
    p.d = d;
    p.aleph = 10;
    check_cost(c, label, cost_sparse(p), tof, q);
  }
  for (const auto& [label, N, L, lam, tof, q] : std::vector<std::tuple<std::string, count_t, count_t, double, double, count_t>>{
           {"SF Reiher", 108, 200, 4258.0, 9.5e10, 3320}, {"SF Li", 152, 275, 3071.8, 1.2e11, 3628}}) {
    CostParams p = params(N, lam);
    p.L = L;
    p.aleph = 10;
    check_cost(c, label, cost_sf(p), tof, q);
  }
  for (const auto& [label, N, L, Xi, lam, beth, tof, q] :
       std::vector<std::tuple<std::string, count_t, count_t, count_t, double, int, double, count_t>>{
           {"DF Reiher", 108, 360, 13031, 294.8, 16, 1.0e10, 3725}, {"DF Li", 152, 394, 20115, 1171.2, 20, 6.4e10, 6404}}) {
    CostParams p = params(N, lam);
    p.L = L;
    p.Xi_total = Xi;
    p.aleph = 10;
    p.beth = beth;
    check_cost(c, label, cost_df(p), tof, q);
  }
  const double s = seconds_since(t0);
  c.check(s < 1.0, fmt("runtime %.3f s (limit 1 s)", s));
  return c;
}

Criterion criterion2() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  const double cos_a = window_interval(Window{WindowKind::cosine, 0.0}, 0.95);
  c.check(std::abs(cos_a - 2.863325) <= kCosineAbs, fmt("cosine interval %.7f (target 2.863325 +-1e-4)", cos_a));
  const KaiserOptimum k = kaiser_optimize(0.95);
  c.check(std::abs(k.a - 2.542853) <= kKaiserAbs && std::abs(k.alpha - 2.179411) <= kKaiserAbs,
          fmt("Kaiser optimum a %.6f at alpha %.6f (target 2.542853 at 2.179411 +-1e-3)", k.a, k.alpha));
  const CIOptimum ci = ci_optimize(0.95);
  c.check(std::abs(ci.a2_over_delta - 304.744) <= kCiRatioAbs && std::abs(ci.alpha - 3.05961) <= kCiAlphaAbs,
          fmt("CI a^2/delta %.4f at alpha %.5f (target 304.744 +-0.5, 3.05961 +-0.01)", ci.a2_over_delta, ci.alpha));
  const CostReport cr = cost_qdrift(2183.6, 0.0016, 108, QdriftMode::confidence);
  const double n_exp = cr.info.at("n_exp");
  c.check(rel_close(n_exp, 5.676e14, kNexpRel), fmt("CI N_exp %.5e (target 5.676e14 +-0.1%%)", n_exp));
  c.check(rel_close(cr.toffoli_total_real, 1.9e16, kQdriftRel),
          fmt("CI Toffoli %.4e (target 1.9e16 +-5%%)", cr.toffoli_total_real));
  const CostReport hl = cost_qdrift(2183.6, 0.0016, 108, QdriftMode::hodges_lehmann);
  c.check(rel_close(hl.toffoli_total_real, 1.8e15, kQdriftRel),
          fmt("HL Toffoli %.4e (target 1.8e15 +-5%%)", hl.toffoli_total_real));
  const double s = seconds_since(t0);
  c.check(s < kQdriftSeconds, fmt("runtime %.2f s (limit 10 s)", s));
  return c;
}

Criterion criterion3() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n = 2; n <= 10; ++n) {
    const ContiguousSchedule s = simulate_contiguous_schedule(n);
    c.check(s.toffoli_count == std::int64_t(n) * n + n - 1 && s.correct,
            fmt("n=%d: %lld Toffolis (n^2+n-1 = %d), bit-exact %s", n, (long long)s.toffoli_count, n * n + n - 1,
                s.correct ? "yes" : "no"));
  }
  const double s = seconds_since(t0);
  c.check(s < kContiguousSeconds, fmt("runtime %.2f s (limit 5 s)", s));
  return c;
}

Criterion criterion4() {
  Criterion c;
  const count_t gap = qrom_two_register_cost(350, 72, 20, 8, 4) - qrom_cost(350 * 72, 20, 32);
  c.check(gap == 4, fmt("two-register minus contiguous at k1=8, k2=4: %lld (target 4)", (long long)gap));
  const count_t egap = qrom_two_register_erase_cost(350, 72, 16, 8) - qrom_erase_cost(350 * 72, 128);
  c.check(egap == 1, fmt("erasure gap at k1=16, k2=8: %lld (target 1)", (long long)egap));
  return c;
}

Criterion criterion5() {
  Criterion c;
  PhysicalAssumptions a3, a4;
  a4.phys_error_rate = 1e-4;
  const LayoutInput in{6.7e9, 1908.0, std::nullopt};
  const PhysicalEstimate e3 = layout_estimate(in, a3), e4 = layout_estimate(in, a4);
  const double days = e3.runtime_seconds / 86400.0;
  c.check(e3.d == 31, fmt("p=1e-3 distance %d (target 31)", e3.d));
  c.check(rel_close(e3.physical_qubits, 4e6, kSurfaceQubitRel),
          fmt("p=1e-3 physical qubits %.4e (target 4e6 +-10%%)", e3.physical_qubits));
  c.check(rel_close(days, 3.0, kSurfaceRuntimeRel), fmt("p=1e-3 runtime %.3f days (target 3 +-15%%)", days));
  c.check(e4.d == 15, fmt("p=1e-4 distance %d (target 15)", e4.d));
  c.check(rel_close(e4.physical_qubits, 1e6, kSurfaceQubitRel),
          fmt("p=1e-4 physical qubits %.4e (target 1e6 +-10%%)", e4.physical_qubits));
  const double ratio = e4.runtime_seconds / e3.runtime_seconds;
  c.check(rel_close(ratio, 15.0 / 31.0, kSurfaceRatioRel), fmt("runtime ratio %.5f (target 15/31 +-1%%)", ratio));
  return c;
}

Criterion criterion6() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  const props::Report r = props::run_all(kPropertyInstances, 4242);
  for (const auto& o : r.items) c.check(o.pass, fmt("%s over %d instances: %s", o.name.c_str(), kPropertyInstances, o.detail.c_str()));
  const double s = seconds_since(t0);
  c.check(s < kPropertySeconds, fmt("runtime %.1f s (limit 300 s)", s));
  return c;
}

// Published integrals are not bundled. Point QRE_FEMOCO_DIR at a directory holding
// reiher.fcidump and, optionally, reiher_thc.json (a factorize record with chi and zeta).
Criterion criterion7() {
  Criterion c;
  const char* dir = std::getenv("QRE_FEMOCO_DIR");
  const std::filesystem::path root = dir ? dir : "";
  if (!dir || !std::filesystem::exists(root / "reiher.fcidump")) {
    c.status = Status::skip;
    c.lines.push_back("skip  QRE_FEMOCO_DIR/reiher.fcidump not supplied");
    return c;
  }
  IntegralData d = load_fcidump((root / "reiher.fcidump").string());
  symmetrize(d);
  const Eigen::MatrixXd Tp = compute_T(d).Tprime;
  auto [sp, sl] = sparse_truncate(d, Tp, 7.5e-5);
  c.check(std::abs(sl.total() - 2135.3) <= kDataLambdaAbs && sp.d == 705831,
          fmt("sparse lambda %.2f (2135.3 +-0.1), d %lld (705831)", sl.total(), (long long)sp.d));
  const DFRep df = double_factorize(single_factorize(d, std::nullopt, 1e-8), 0.00125);
  const double dl = lambda_df(df, Tp).total();
  c.check(std::abs(dl - 294.8) <= kDataLambdaAbs && df.L() == 360 && df.Xi_total() == 13031,
          fmt("DF lambda %.2f (294.8 +-0.1), L %d (360), Xi_total %lld (13031)", dl, df.L(), (long long)df.Xi_total()));
  if (std::filesystem::exists(root / "reiher_thc.json")) {
    std::ifstream f(root / "reiher_thc.json");
    json j = json::parse(f);
    const THCRep thc = std::get<THCRep>(rep_from_json(j.contains("result") ? j["result"] : j));
    const double tl = lambda_thc(thc, Tp).total();
    c.check(thc.M() == 350 && std::abs(tl - 306.3) <= kDataLambdaAbs, fmt("THC lambda %.2f (306.3 +-0.1), M %d", tl, thc.M()));
  } else {
    c.lines.push_back("skip  THC factors not supplied");
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expected.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--expect-fail k]...\n");
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Criterion()>>> all{
      {"golden cost formulas", criterion1},       {"qDRIFT constants", criterion2},
      {"contiguous register", criterion3},        {"two-register QROM example", criterion4},
      {"surface code calibration", criterion5},   {"property suite", criterion6},
      {"published-data reproduction", criterion7}};

  std::set<int> failed;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Criterion c;
    try {
      c = all[i].second();
    } catch (const std::exception& e) {
      c.status = Status::fail;
      c.lines.push_back(std::string("FAIL  exception: ") + e.what());
    }
    const char* tag = c.status == Status::pass ? "PASS" : c.status == Status::fail ? "FAIL" : "SKIP";
    std::printf("criterion %d [%s]: %s\n", id, tag, all[i].first.c_str());
    for (const auto& l : c.lines) std::printf("    %s\n", l.c_str());
    std::fflush(stdout);
    if (c.status == Status::fail) failed.insert(id);
  }

  std::printf("failed:");
  for (int f : failed) std::printf(" %d", f);
  std::printf("%s\n", failed.empty() ? " none" : "");
  if (failed != expected) {
    std::printf("outcome differs from the expected failure set\n");
    return 1;
  }
  return 0;
}
